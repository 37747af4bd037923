#pragma once

#include "jcond/expr.hpp"

#include <compare>
#include <map>
#include <stdexcept>

namespace jcond {

/// Distributional atom: 1, H_gamma, or D^l delta_gamma (DiracDeriv(0) is delta_gamma).
/// Ordered One < Heaviside < DiracDeriv(0) < DiracDeriv(1) < ...
struct DistAtom {
    enum class Kind : std::uint8_t { One, Heaviside, DiracDeriv };
    Kind kind = Kind::One;
    unsigned order = 0; // DiracDeriv only

    static DistAtom one() { return {Kind::One, 0}; }
    static DistAtom heaviside() { return {Kind::Heaviside, 0}; }
    static DistAtom dirac(unsigned l) { return {Kind::DiracDeriv, l}; }

    bool is_dirac() const { return kind == Kind::DiracDeriv; }

    friend bool operator==(const DistAtom&, const DistAtom&) = default;
    friend auto operator<=>(const DistAtom&, const DistAtom&) = default;
};

class UnsupportedDistributionalProduct : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Finite sum over distributional atoms with smooth Expr coefficients.
/// Zero coefficients are never stored.
class GenExpr {
public:
    using Parts = std::map<DistAtom, Expr>;

    GenExpr() = default;
    GenExpr(Expr smooth) { add(DistAtom::one(), std::move(smooth)); }
    GenExpr(DistAtom atom, Expr coefficient) { add(atom, std::move(coefficient)); }

    static GenExpr heaviside() { return {DistAtom::heaviside(), Expr::one()}; }
    static GenExpr dirac(unsigned l) { return {DistAtom::dirac(l), Expr::one()}; }

    const Parts& parts() const { return parts_; }
    bool is_zero() const { return parts_.empty(); }
    bool is_smooth() const;
    bool has_dirac() const;

    /// Coefficient of `atom`, zero if absent.
    Expr coefficient(const DistAtom& atom) const;

    void add(const DistAtom& atom, const Expr& coefficient);

    GenExpr& operator+=(const GenExpr& other);
    GenExpr& operator-=(const GenExpr& other);
    friend GenExpr operator+(GenExpr a, const GenExpr& b) { return a += b; }
    friend GenExpr operator-(GenExpr a, const GenExpr& b) { return a -= b; }
    friend GenExpr operator*(const Expr& s, const GenExpr& g);

    friend bool operator==(const GenExpr&, const GenExpr&) = default;

private:
    Parts parts_;
};

/// Product within the resoluble calculus: anything times smooth, and H*H = H.
/// Products involving a Dirac part with a non-smooth factor throw.
GenExpr gen_mul(const GenExpr& a, const GenExpr& b);

/// Leibniz over parts, with D_i H = gamma_i delta and D_i D^l delta = gamma_i D^{l+1} delta.
/// `dim` is the ambient dimension of the gamma jets produced.
GenExpr derive_gen(const GenExpr& g, std::size_t axis, std::size_t dim);

/// K_{p,l} gamma in GammaJet atoms, by the first-order recurrence.
/// Requires order(p) >= 1 and l < order(p); throws std::out_of_range otherwise.
Expr k_operator(const MultiIndex& p, unsigned l);

/// D^p H_gamma = sum_{l < |p|} (K_{p,l} gamma) D^l delta. For p = 0 returns H.
GenExpr expand_heaviside_derivative(const MultiIndex& p);

/// Eliminates explicit gamma factors in Dirac coefficients:
/// gamma delta = 0 and gamma D^l delta = -l D^{l-1} delta, to a fixpoint.
GenExpr reduce_gamma_delta(const GenExpr& g);

/// Number of single rewrite steps reduce_gamma_delta performs on `g`.
std::size_t reduction_steps(const GenExpr& g);

/// Canonical coefficients with all gamma-delta reductions applied. Idempotent.
GenExpr gen_normal_form(const GenExpr& g);

/// Is this the undifferentiated gamma symbol?
bool is_gamma_value(const Atom& a);

} // namespace jcond
