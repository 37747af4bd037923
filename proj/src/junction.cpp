#include "jcond/junction.hpp"

#include "jcond/classify.hpp"

namespace jcond {

Expr TraceBinding::minus(std::size_t alpha, std::size_t dim) const
{
    return Expr(Atom::trace(Side::Minus, alpha, MultiIndex(dim)));
}

Expr TraceBinding::plus(std::size_t alpha, std::size_t dim) const
{
    return identify_sides ? minus(alpha, dim) : Expr(Atom::trace(Side::Plus, alpha, MultiIndex(dim)));
}

Bindings TraceBinding::psi_chi(std::size_t unknowns, std::size_t dim) const
{
    Bindings b;
    for (std::size_t a = 0; a < unknowns; ++a) {
        b.emplace(Atom::psi(a, MultiIndex(dim)), minus(a, dim));
        b.emplace(Atom::chi(a, MultiIndex(dim)), plus(a, dim) - minus(a, dim));
    }
    return b;
}

Bindings TraceBinding::side(Side s, std::size_t unknowns, std::size_t dim) const
{
    Bindings b;
    for (std::size_t a = 0; a < unknowns; ++a)
        b.emplace(Atom::unknown(a, MultiIndex(dim)), s == Side::Plus ? plus(a, dim) : minus(a, dim));
    return b;
}

Locus locus(const DistAtom& atom)
{
    switch (atom.kind) {
    case DistAtom::Kind::One: return Locus::Everywhere;
    case DistAtom::Kind::Heaviside: return Locus::NearGamma;
    case DistAtom::Kind::DiracDeriv: return Locus::OnGamma;
    }
    return Locus::Everywhere;
}

bool JunctionConditionSet::empty() const { return count() == 0; }

std::size_t JunctionConditionSet::count() const
{
    std::size_t n = 0;
    for (const auto& e : equations)
        n += e.atoms.size();
    return n;
}

GenExpr apply_linear_op(const LinearOpSpec& op, const GenExpr& g, std::size_t dim)
{
    GenExpr out;
    for (const auto& t : op.terms()) {
        GenExpr d = g;
        for (std::size_t axis : t.derivative.axis_sequence())
            d = derive_gen(d, axis, dim);
        out += t.coefficient * d;
    }
    return out;
}

namespace {

EquationConditions to_conditions(const GenExpr& g)
{
    EquationConditions ec;
    const GenExpr nf = gen_normal_form(g);
    for (const auto& [a, c] : nf.parts())
        ec.atoms.emplace(a, Condition{c, ConditionStatus::Constraint});
    return ec;
}

} // namespace

JunctionConditionSet junction_from_resoluble(const PDESystem& sys, const ResolubleCertificate& cert,
                                             const TraceBinding& binding)
{
    if (cert.equations.size() != sys.equations.size())
        throw std::invalid_argument("certificate does not match the number of equations");
    const std::size_t dim = sys.dim();
    const Bindings bind = binding.psi_chi(sys.unknown_count(), dim);
    JunctionConditionSet out;
    for (std::size_t b = 0; b < sys.equations.size(); ++b) {
        GenExpr total;
        for (const auto& t : cert.equations[b]) {
            const Expr coeff = substitute(t.multiplier, bind, JetClosure::Automatic);
            if (t.power == 0) {
                if (t.p.is_zero())
                    total += GenExpr(coeff);
                continue; // D^p 1 = 0
            }
            // omega^l -> H^l = H before differentiation
            total = total + gen_mul(GenExpr(coeff), expand_heaviside_derivative(t.p));
        }
        total -= GenExpr(sys.equations[b].rhs);
        out.equations.push_back(to_conditions(total));
    }
    return out;
}

JunctionConditionSet junction_from_mh(const PDESystem& sys, const MHCertificate& cert, const TraceBinding& binding)
{
    if (cert.equations.size() != sys.equations.size())
        throw std::invalid_argument("certificate does not match the number of equations");
    const std::size_t dim = sys.dim();
    const std::size_t a = sys.unknown_count();
    const Bindings to_plus = binding.side(Side::Plus, a, dim);
    const Bindings to_minus = binding.side(Side::Minus, a, dim);
    auto on = [&](const Bindings& side, const Expr& e) { return substitute(e, side, JetClosure::Automatic); };
    auto unknown = [&](std::size_t alpha) { return Expr(Atom::unknown(alpha, MultiIndex(dim))); };
    const GenExpr heaviside = GenExpr::heaviside();

    JunctionConditionSet out;
    for (std::size_t b = 0; b < sys.equations.size(); ++b) {
        const auto& ec = cert.equations[b];
        GenExpr total(on(to_minus, expand_mh(ec, dim)));

        for (const auto& lin : ec.linear) {
            const Expr jump = binding.plus(lin.alpha, dim) - binding.minus(lin.alpha, dim);
            total += apply_linear_op(lin.op, gen_mul(GenExpr(jump), heaviside), dim);
        }
        for (const auto& q : ec.quadratic) {
            Expr bracket;
            GenExpr weighted;
            for (const auto& e : q.entries) {
                const Expr upu = unknown(e.alpha) * apply_linear_op(e.p.op(), unknown(e.alpha_prime));
                bracket += on(to_plus, upu) - on(to_minus, upu);
                const Expr pair = (binding.plus(e.alpha, dim) + binding.minus(e.alpha, dim)) *
                                  (binding.plus(e.alpha_prime, dim) - binding.minus(e.alpha_prime, dim));
                weighted += pair * apply_linear_op(e.p.principal(), heaviside, dim);
            }
            total += apply_linear_op(q.outer, gen_mul(GenExpr(bracket), heaviside), dim);
            total += apply_linear_op(q.outer, Rational(1, 2) * weighted, dim);
        }
        total -= GenExpr(sys.equations[b].rhs);
        out.equations.push_back(to_conditions(total));
    }
    return out;
}

JunctionConditionSet simplify_with_classical(const JunctionConditionSet& conds, const PDESystem& sys,
                                             const TraceBinding& binding)
{
    if (conds.equations.size() != sys.equations.size())
        throw std::invalid_argument("condition set does not match the number of equations");
    const std::size_t dim = sys.dim();
    const std::size_t a = sys.unknown_count();
    const Bindings to_plus = binding.side(Side::Plus, a, dim);
    const Bindings to_minus = binding.side(Side::Minus, a, dim);

    JunctionConditionSet out;
    for (std::size_t b = 0; b < sys.equations.size(); ++b) {
        const Expr& op = sys.equations[b].lhs;
        const Expr t_minus = substitute(op, to_minus, JetClosure::Automatic);
        const Expr t_plus = substitute(op, to_plus, JetClosure::Automatic);
        EquationConditions ec;
        for (const auto& [atom, cond] : conds.equations[b].atoms) {
            if (atom.kind == DistAtom::Kind::One) {
                if (cond.coefficient - (t_minus - sys.equations[b].rhs) != Expr{})
                    throw std::logic_error("smooth part differs from T(U_-) - f");
                continue;
            }
            if (atom.kind == DistAtom::Kind::Heaviside && cond.status == ConditionStatus::Constraint) {
                const Expr known = t_plus - t_minus;
                const Expr residual = cond.coefficient - known;
                if (residual.is_zero())
                    ec.atoms.emplace(atom, Condition{known, ConditionStatus::SatisfiedByHypothesis});
                else
                    ec.atoms.emplace(atom, Condition{residual, ConditionStatus::Constraint});
                continue;
            }
            ec.atoms.emplace(atom, cond);
        }
        out.equations.push_back(std::move(ec));
    }
    return out;
}

JunctionConditionSet restrict_to_gamma(const JunctionConditionSet& conds)
{
    JunctionConditionSet out;
    for (const auto& ec : conds.equations) {
        EquationConditions next;
        GenExpr dirac;
        for (const auto& [atom, cond] : ec.atoms) {
            if (atom.is_dirac())
                dirac.add(atom, cond.coefficient);
            else
                next.atoms.emplace(atom, cond);
        }
        const GenExpr reduced = reduce_gamma_delta(dirac);
        for (const auto& [atom, c] : reduced.parts())
            next.atoms.emplace(atom, Condition{c, ConditionStatus::Constraint});
        out.equations.push_back(std::move(next));
    }
    return out;
}

bool conditions_equal(const JunctionConditionSet& a, const JunctionConditionSet& b) { return a == b; }

JunctionConditionSet derive_junction_conditions(const PDESystem& sys, const ResolubleCertificate& cert,
                                                const TraceBinding& binding)
{
    return restrict_to_gamma(simplify_with_classical(junction_from_resoluble(sys, cert, binding), sys, binding));
}

JunctionConditionSet derive_junction_conditions(const PDESystem& sys, const MHCertificate& cert,
                                                const TraceBinding& binding)
{
    return restrict_to_gamma(simplify_with_classical(junction_from_mh(sys, cert, binding), sys, binding));
}

} // namespace jcond
