#include "jcond/distalg.hpp"

#include <map>

namespace jcond {

bool GenExpr::is_smooth() const
{
    return parts_.empty() || (parts_.size() == 1 && parts_.begin()->first.kind == DistAtom::Kind::One);
}

bool GenExpr::has_dirac() const
{
    for (const auto& [a, c] : parts_)
        if (a.is_dirac())
            return true;
    return false;
}

Expr GenExpr::coefficient(const DistAtom& atom) const
{
    auto it = parts_.find(atom);
    return it == parts_.end() ? Expr{} : it->second;
}

void GenExpr::add(const DistAtom& atom, const Expr& coefficient)
{
    if (coefficient.is_zero())
        return;
    auto [it, inserted] = parts_.try_emplace(atom, coefficient);
    if (!inserted) {
        it->second += coefficient;
        if (it->second.is_zero())
            parts_.erase(it);
    }
}

GenExpr& GenExpr::operator+=(const GenExpr& other)
{
    for (const auto& [a, c] : other.parts_)
        add(a, c);
    return *this;
}

GenExpr& GenExpr::operator-=(const GenExpr& other)
{
    for (const auto& [a, c] : other.parts_)
        add(a, -c);
    return *this;
}

GenExpr operator*(const Expr& s, const GenExpr& g)
{
    GenExpr out;
    for (const auto& [a, c] : g.parts_)
        out.add(a, s * c);
    return out;
}

GenExpr gen_mul(const GenExpr& a, const GenExpr& b)
{
    if (a.is_smooth())
        return a.coefficient(DistAtom::one()) * b;
    if (b.is_smooth())
        return b.coefficient(DistAtom::one()) * a;
    if (a.has_dirac() || b.has_dirac())
        throw UnsupportedDistributionalProduct(
            "product of a Dirac-type term with a non-smooth factor is outside the resoluble calculus");
    // both are c0 + c1 H; H*H = H
    const Expr a0 = a.coefficient(DistAtom::one()), a1 = a.coefficient(DistAtom::heaviside());
    const Expr b0 = b.coefficient(DistAtom::one()), b1 = b.coefficient(DistAtom::heaviside());
    GenExpr out;
    out.add(DistAtom::one(), a0 * b0);
    out.add(DistAtom::heaviside(), a0 * b1 + a1 * b0 + a1 * b1);
    return out;
}

GenExpr derive_gen(const GenExpr& g, std::size_t axis, std::size_t dim)
{
    const Expr gamma_i(Atom::gamma(MultiIndex::unit(dim, axis)));
    GenExpr out;
    for (const auto& [a, c] : g.parts()) {
        out.add(a, total_derivative(c, axis));
        switch (a.kind) {
        case DistAtom::Kind::One:
            break;
        case DistAtom::Kind::Heaviside:
            out.add(DistAtom::dirac(0), c * gamma_i);
            break;
        case DistAtom::Kind::DiracDeriv:
            out.add(DistAtom::dirac(a.order + 1), c * gamma_i);
            break;
        }
    }
    return out;
}

namespace {

struct KKey {
    MultiIndex p;
    unsigned l;
    auto operator<=>(const KKey&) const = default;
};

Expr k_rec(const MultiIndex& p, int l, std::map<KKey, Expr>& memo)
{
    const unsigned ord = p.order();
    if (l < 0 || static_cast<unsigned>(l) >= ord)
        return {};
    if (ord == 1)
        return Expr(Atom::gamma(p));
    KKey key{p, static_cast<unsigned>(l)};
    if (auto it = memo.find(key); it != memo.end())
        return it->second;
    // write p = p' + q with q the unit step in the last direction applied
    std::size_t q = p.dim();
    while (q-- > 0)
        if (p[q] > 0)
            break;
    MultiIndex prev = p;
    prev[q] -= 1;
    Expr val = total_derivative(k_rec(prev, l, memo), q) +
               k_rec(prev, l - 1, memo) * Expr(Atom::gamma(MultiIndex::unit(p.dim(), q)));
    memo.emplace(key, val);
    return val;
}

} // namespace

Expr k_operator(const MultiIndex& p, unsigned l)
{
    if (p.order() == 0 || l >= p.order())
        throw std::out_of_range("k_operator requires order(p) >= 1 and 0 <= l < order(p)");
    std::map<KKey, Expr> memo;
    return k_rec(p, static_cast<int>(l), memo);
}

GenExpr expand_heaviside_derivative(const MultiIndex& p)
{
    if (p.is_zero())
        return GenExpr::heaviside();
    std::map<KKey, Expr> memo;
    GenExpr out;
    for (unsigned l = 0; l < p.order(); ++l)
        out.add(DistAtom::dirac(l), k_rec(p, static_cast<int>(l), memo));
    return out;
}

bool is_gamma_value(const Atom& a) { return a.kind == AtomKind::Gamma && a.jet.is_zero(); }

namespace {

/// The gamma atom present in a monomial, if any.
const Atom* gamma_factor(const Monomial& m, unsigned& power)
{
    for (const auto& f : m.factors())
        if (is_gamma_value(f.atom)) {
            power = f.power;
            return &f.atom;
        }
    power = 0;
    return nullptr;
}

} // namespace

GenExpr reduce_gamma_delta(const GenExpr& g)
{
    GenExpr out;
    for (const auto& [a, c] : g.parts()) {
        if (!a.is_dirac()) {
            out.add(a, c);
            continue;
        }
        for (const auto& [m, coef] : c.terms()) {
            unsigned k = 0;
            const Atom* gam = gamma_factor(m, k);
            if (!gam) {
                out.add(a, Expr(m, coef));
                continue;
            }
            if (k > a.order)
                continue; // reaches gamma * delta = 0
            // k applications of gamma D^l delta = -l D^{l-1} delta
            Rational factor = coef;
            for (unsigned j = 0; j < k; ++j)
                factor *= -static_cast<long>(a.order - j);
            out.add(DistAtom::dirac(a.order - k), Expr(m.without(*gam, k), factor));
        }
    }
    return out;
}

std::size_t reduction_steps(const GenExpr& g)
{
    std::size_t steps = 0;
    for (const auto& [a, c] : g.parts()) {
        if (!a.is_dirac())
            continue;
        for (const auto& [m, coef] : c.terms()) {
            unsigned k = 0;
            if (gamma_factor(m, k))
                steps += k > a.order ? a.order + 1 : k;
        }
    }
    return steps;
}

GenExpr gen_normal_form(const GenExpr& g) { return reduce_gamma_delta(g); }

} // namespace jcond
