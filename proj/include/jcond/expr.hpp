#pragma once

#include "jcond/atom.hpp"

#include <gmpxx.h>

#include <functional>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

namespace jcond {

using Rational = mpq_class;

struct Factor {
    Atom atom;
    unsigned power = 1;

    friend bool operator==(const Factor&, const Factor&) = default;
    friend std::strong_ordering operator<=>(const Factor& a, const Factor& b);
};

/// Product of atom powers; factors are kept sorted by atom with distinct atoms.
class Monomial {
public:
    Monomial() = default;
    explicit Monomial(Atom atom, unsigned power = 1);
    explicit Monomial(std::vector<Factor> factors); // normalizes

    const std::vector<Factor>& factors() const { return factors_; }
    bool is_one() const { return factors_.empty(); }
    unsigned degree() const;

    /// Power of `atom` in this monomial (0 if absent).
    unsigned power_of(const Atom& atom) const;

    /// Factor of this monomial dropping `count` powers of `atom`.
    Monomial without(const Atom& atom, unsigned count = 1) const;

    friend Monomial operator*(const Monomial& a, const Monomial& b);

    /// Splits into (factors satisfying pred, the rest).
    std::pair<Monomial, Monomial> split(const std::function<bool(const Atom&)>& pred) const;

    friend bool operator==(const Monomial&, const Monomial&) = default;
    /// Degree first, then lexicographic on factors.
    friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b);

private:
    std::vector<Factor> factors_;
};

/// Polynomial with exact rational coefficients over jet atoms, always in
/// canonical form: terms sorted by monomial order, no zero coefficients.
/// Structural equality of two Expr values is mathematical equality.
class Expr {
public:
    using Terms = std::map<Monomial, Rational>;

    Expr() = default;
    Expr(const Rational& c);
    Expr(int c) : Expr(Rational(c)) {}
    explicit Expr(Atom atom);
    Expr(Monomial m, const Rational& c);

    static Expr zero() { return {}; }
    static Expr one() { return Expr(1); }

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    /// Constant term (0 if absent).
    Rational constant_term() const;
    std::size_t size() const { return terms_.size(); }

    /// Maximal monomial degree counting only atoms satisfying pred.
    unsigned degree_in(const std::function<bool(const Atom&)>& pred) const;
    bool any_atom(const std::function<bool(const Atom&)>& pred) const;
    void for_each_atom(const std::function<void(const Atom&)>& fn) const;

    Expr& operator+=(const Expr& other);
    Expr& operator-=(const Expr& other);
    Expr& operator*=(const Expr& other);
    Expr& operator*=(const Rational& c);
    void add_term(const Monomial& m, const Rational& c);

    friend Expr operator+(Expr a, const Expr& b) { return a += b; }
    friend Expr operator-(Expr a, const Expr& b) { return a -= b; }
    friend Expr operator*(const Expr& a, const Expr& b);
    friend Expr operator*(Expr a, const Rational& c) { return a *= c; }
    friend Expr operator*(const Rational& c, Expr a) { return a *= c; }
    friend Expr operator-(Expr a);

    friend bool operator==(const Expr&, const Expr&) = default;

private:
    Terms terms_;
};

Expr pow(const Expr& base, unsigned exponent);

/// Canonical form. Expr is canonical by construction, so this is the identity;
/// kept as the named entry point of the kernel contract.
inline Expr normalize(const Expr& e) { return e; }

/// Sound and complete for the polynomial fragment.
inline bool expr_equal(const Expr& a, const Expr& b) { return a == b; }

/// Derivative of a single atom in direction `axis` (0-based).
Expr atom_derivative(const Atom& atom, std::size_t axis);

/// Total derivative in direction `axis` (0-based) by the Leibniz rule.
Expr total_derivative(const Expr& e, std::size_t axis);

/// D^p e; directions applied in increasing axis order.
Expr derivative_multi(const Expr& e, const MultiIndex& p);

class InconsistentJetBinding : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Bindings = std::map<Atom, Expr>;

enum class JetClosure { Off, Automatic };

/// Simultaneous replacement of atoms.
///
/// With JetClosure::Automatic every bound atom with zero jet also binds all its
/// derivative jets to the corresponding derivatives of its image. Explicit
/// bindings of a derivative jet whose base is also bound must agree with the
/// derivative of the base image, otherwise InconsistentJetBinding is thrown.
Expr substitute(const Expr& e, const Bindings& bindings, JetClosure closure = JetClosure::Off);

/// Numerical evaluation given a value for each atom.
double evaluate(const Expr& e, const std::function<double(const Atom&)>& value);

} // namespace jcond
