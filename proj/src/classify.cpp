#include "jcond/classify.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace jcond {

namespace {

bool is_omega(const Atom& a) { return a.kind == AtomKind::Omega; }
bool is_unknown(const Atom& a) { return a.kind == AtomKind::Unknown; }

unsigned unknown_jet_order(const Expr& e)
{
    unsigned m = 0;
    e.for_each_atom([&](const Atom& a) {
        if (is_unknown(a))
            m = std::max(m, a.jet.order());
    });
    return m;
}

Expr omega_power_derivative(const MultiIndex& p, unsigned power)
{
    const std::size_t dim = p.dim();
    return derivative_multi(pow(Expr(Atom::omega(MultiIndex(dim))), power), p);
}

} // namespace

Expr ansatz_image(const Expr& op, std::size_t unknowns, std::size_t dim)
{
    Bindings b;
    const Expr omega(Atom::omega(MultiIndex(dim)));
    for (std::size_t alpha = 0; alpha < unknowns; ++alpha)
        b.emplace(Atom::unknown(alpha, MultiIndex(dim)),
                  Expr(Atom::psi(alpha, MultiIndex(dim))) + Expr(Atom::chi(alpha, MultiIndex(dim))) * omega);
    return substitute(op, b, JetClosure::Automatic);
}

OmegaCollected collect_omega(const Expr& e)
{
    OmegaCollected out;
    for (const auto& [m, c] : e.terms()) {
        auto [w, rest] = m.split(is_omega);
        out[w].add_term(rest, c);
    }
    return out;
}

AnsatzExpansion substitute_ansatz(const PDESystem& sys)
{
    AnsatzExpansion out;
    for (const auto& eq : sys.equations)
        out.equations.push_back(collect_omega(ansatz_image(eq.lhs, sys.unknown_count(), sys.dim())));
    return out;
}

OmegaBasis omega_basis(std::size_t dim, unsigned max_order, unsigned max_power)
{
    OmegaBasis basis;
    const auto ps = multi_indices_up_to(dim, max_order);
    for (unsigned l = 1; l <= max_power; ++l)
        for (const auto& p : ps) {
            OmegaBasisElement el{p, l, {}};
            const Expr d = omega_power_derivative(p, l);
            for (const auto& [m, c] : d.terms())
                el.expansion.emplace(m, c);
            basis.elements.push_back(std::move(el));
        }
    return basis;
}

namespace {

struct Row {
    Monomial monomial;
    std::vector<Rational> entries;
    Expr rhs;
    std::map<Monomial, Rational> combination;
};

void axpy(Row& dst, const Row& src, const Rational& k)
{
    for (std::size_t j = 0; j < dst.entries.size(); ++j)
        if (src.entries[j] != 0)
            dst.entries[j] -= k * src.entries[j];
    dst.rhs -= src.rhs * k;
    for (const auto& [m, w] : src.combination) {
        auto& slot = dst.combination[m];
        slot -= k * w;
        if (slot == 0)
            dst.combination.erase(m);
    }
}

} // namespace

EquationVerdict decompose_operator(const Expr& op, std::size_t unknowns, std::size_t dim, const DecomposeOptions& opt)
{
    EquationVerdict v;
    v.max_order = opt.max_order.value_or(unknown_jet_order(op));
    v.max_power = opt.max_power.value_or(op.degree_in(is_unknown));

    OmegaCollected target = collect_omega(ansatz_image(op, unknowns, dim));
    Expr remainder;
    if (auto it = target.find(Monomial{}); it != target.end()) {
        remainder = it->second;
        target.erase(it);
    }

    OmegaBasis basis = omega_basis(dim, v.max_order, v.max_power);
    std::vector<std::size_t> cols(basis.elements.size());
    std::iota(cols.begin(), cols.end(), 0);
    if (opt.order == EliminationOrder::Reversed)
        std::reverse(cols.begin(), cols.end());

    std::set<Monomial> row_keys;
    for (const auto& el : basis.elements)
        for (const auto& [m, c] : el.expansion)
            row_keys.insert(m);
    for (const auto& [m, c] : target)
        row_keys.insert(m);

    std::vector<Row> rows;
    for (const auto& m : row_keys) {
        Row r{m, std::vector<Rational>(cols.size(), 0), {}, {{m, Rational(1)}}};
        for (std::size_t j = 0; j < cols.size(); ++j) {
            const auto& ex = basis.elements[cols[j]].expansion;
            if (auto it = ex.find(m); it != ex.end())
                r.entries[j] = it->second;
        }
        if (auto it = target.find(m); it != target.end())
            r.rhs = it->second;
        rows.push_back(std::move(r));
    }
    if (opt.order == EliminationOrder::Reversed)
        std::reverse(rows.begin(), rows.end());

    // Gauss-Jordan; pivot_of[j] = row index or npos
    constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::vector<std::size_t> pivot_of(cols.size(), npos);
    std::vector<bool> used(rows.size(), false);
    for (std::size_t j = 0; j < cols.size(); ++j) {
        std::size_t pr = npos;
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (!used[i] && rows[i].entries[j] != 0) {
                pr = i;
                break;
            }
        if (pr == npos)
            continue;
        used[pr] = true;
        pivot_of[j] = pr;
        Rational inv = 1 / rows[pr].entries[j];
        for (auto& e : rows[pr].entries)
            e *= inv;
        rows[pr].rhs *= inv;
        for (auto& [m, w] : rows[pr].combination)
            w *= inv;
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (i != pr && rows[i].entries[j] != 0) {
                Rational k = rows[i].entries[j];
                axpy(rows[i], rows[pr], k);
            }
    }

    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (used[i] || rows[i].rhs.is_zero())
            continue;
        InfeasibilityWitness w;
        w.residual = rows[i].rhs;
        for (const auto& [m, c] : rows[i].combination)
            w.combination.emplace_back(m, c);
        // first monomial of the combination carrying a nonzero coefficient of its own
        for (const auto& [m, c] : w.combination)
            if (target.count(m)) {
                w.monomial = m;
                break;
            }
        v.resoluble = false;
        v.witness = std::move(w);
        return v;
    }

    v.resoluble = true;
    if (!remainder.is_zero())
        v.certificate.push_back({remainder, MultiIndex(dim), 0});
    std::vector<ResolubleTerm> terms;
    for (std::size_t j = 0; j < cols.size(); ++j) {
        if (pivot_of[j] == npos || rows[pivot_of[j]].rhs.is_zero())
            continue;
        const auto& el = basis.elements[cols[j]];
        terms.push_back({rows[pivot_of[j]].rhs, el.p, el.power});
    }
    std::sort(terms.begin(), terms.end(), [](const ResolubleTerm& a, const ResolubleTerm& b) {
        if (a.p != b.p)
            return a.p < b.p;
        return a.power < b.power;
    });
    v.certificate.insert(v.certificate.end(), terms.begin(), terms.end());
    return v;
}

bool ClassifyReport::resoluble() const
{
    return std::all_of(equations.begin(), equations.end(), [](const EquationVerdict& v) { return v.resoluble; });
}

ResolubleCertificate ClassifyReport::certificate() const
{
    if (!resoluble())
        throw std::logic_error("system is not resoluble; no certificate");
    ResolubleCertificate c;
    for (const auto& v : equations)
        c.equations.push_back(v.certificate);
    return c;
}

ClassifyReport resoluble_decompose(const PDESystem& sys, const DecomposeOptions& opt)
{
    ClassifyReport report;
    for (const auto& eq : sys.equations) {
        EquationVerdict v = decompose_operator(eq.lhs, sys.unknown_count(), sys.dim(), opt);
        if (v.resoluble && !verify_operator_certificate(eq.lhs, sys.unknown_count(), sys.dim(), v.certificate))
            throw std::logic_error("solver produced a certificate that fails its identity");
        report.equations.push_back(std::move(v));
    }
    return report;
}

bool verify_operator_certificate(const Expr& op, std::size_t unknowns, std::size_t dim,
                                 const std::vector<ResolubleTerm>& terms)
{
    Expr sum;
    for (const auto& t : terms) {
        if (t.p.dim() != dim)
            return false;
        if (t.multiplier.any_atom([](const Atom& a) {
                return a.kind == AtomKind::Unknown || a.kind == AtomKind::Omega || a.kind == AtomKind::Trace ||
                       a.kind == AtomKind::Gamma;
            }))
            return false;
        sum += t.multiplier * omega_power_derivative(t.p, t.power);
    }
    return expr_equal(sum, ansatz_image(op, unknowns, dim));
}

bool verify_certificate(const PDESystem& sys, const ResolubleCertificate& cert)
{
    if (cert.equations.size() != sys.equations.size())
        return false;
    for (std::size_t b = 0; b < sys.equations.size(); ++b)
        if (!verify_operator_certificate(sys.equations[b].lhs, sys.unknown_count(), sys.dim(), cert.equations[b]))
            return false;
    return true;
}

bool witness_is_valid(const Expr& op, std::size_t unknowns, std::size_t dim, const EquationVerdict& v)
{
    if (v.resoluble || !v.witness)
        return false;
    const auto& w = *v.witness;
    OmegaCollected target = collect_omega(ansatz_image(op, unknowns, dim));
    target.erase(Monomial{});
    OmegaBasis basis = omega_basis(dim, v.max_order, v.max_power);
    for (const auto& el : basis.elements) {
        Rational s = 0;
        for (const auto& [m, y] : w.combination)
            if (auto it = el.expansion.find(m); it != el.expansion.end())
                s += y * it->second;
        if (s != 0)
            return false;
    }
    Expr rhs;
    bool witness_in_support = false;
    for (const auto& [m, y] : w.combination) {
        if (auto it = target.find(m); it != target.end())
            rhs += it->second * y;
        witness_in_support |= (m == w.monomial);
    }
    return witness_in_support && !rhs.is_zero() && rhs == w.residual;
}

// ------------------------------------------------------------------ MH path

Expr expand_mh(const MHEquationCert& cert, std::size_t dim)
{
    Expr out;
    for (const auto& lin : cert.linear)
        out += apply_linear_op(lin.op, Expr(Atom::unknown(lin.alpha, MultiIndex(dim))));
    for (const auto& q : cert.quadratic) {
        Expr inner;
        for (const auto& e : q.entries)
            inner += Expr(Atom::unknown(e.alpha, MultiIndex(dim))) *
                     apply_linear_op(e.p.op(), Expr(Atom::unknown(e.alpha_prime, MultiIndex(dim))));
        out += apply_linear_op(q.outer, inner);
    }
    return out;
}

bool mh_verify(const PDESystem& sys, const MHCertificate& cert)
{
    if (cert.equations.size() != sys.equations.size())
        return false;
    for (std::size_t b = 0; b < sys.equations.size(); ++b)
        if (!expr_equal(expand_mh(cert.equations[b], sys.dim()), sys.equations[b].lhs))
            return false;
    return true;
}

std::optional<MHCertificate> mh_detect(const PDESystem& sys)
{
    const std::size_t dim = sys.dim();
    MHCertificate cert;
    for (const auto& eq : sys.equations) {
        std::map<std::pair<std::size_t, std::size_t>, std::vector<LinearOpTerm>> quad;
        std::map<std::size_t, std::vector<LinearOpTerm>> lin;
        for (const auto& [m, c] : eq.lhs.terms()) {
            auto [u, rest] = m.split(is_unknown);
            Expr coeff(rest, c);
            const auto& fs = u.factors();
            if (u.degree() == 1) {
                lin[fs[0].atom.index].push_back({coeff, fs[0].atom.jet});
            } else if (u.degree() == 2) {
                const Atom& a0 = fs[0].atom;
                const Atom& a1 = fs.size() == 2 ? fs[1].atom : fs[0].atom;
                if (a0.jet.is_zero() && a1.jet.order() <= 1)
                    quad[{a0.index, a1.index}].push_back({coeff, a1.jet});
                else if (a1.jet.is_zero() && a0.jet.order() <= 1)
                    quad[{a1.index, a0.index}].push_back({coeff, a0.jet});
                else
                    return std::nullopt;
            } else {
                return std::nullopt;
            }
        }
        MHEquationCert ec;
        for (auto& [alpha, terms] : lin)
            ec.linear.push_back({alpha, LinearOpSpec(std::move(terms))});
        if (!quad.empty()) {
            MHQuadTerm q{LinearOpSpec::identity(dim), {}};
            for (auto& [pair, terms] : quad)
                q.entries.push_back({pair.first, pair.second, FirstOrderOp(LinearOpSpec(std::move(terms)))});
            ec.quadratic.push_back(std::move(q));
        }
        cert.equations.push_back(std::move(ec));
    }
    if (!mh_verify(sys, cert))
        return std::nullopt;
    return cert;
}

ResolubleCertificate mh_to_resoluble(const PDESystem& sys, const MHCertificate& cert)
{
    if (!mh_verify(sys, cert))
        throw DecompositionFailed("MH certificate does not verify");
    ResolubleCertificate out;
    for (std::size_t b = 0; b < sys.equations.size(); ++b) {
        const auto& ec = cert.equations[b];
        const Expr expanded = expand_mh(ec, sys.dim());
        unsigned order = unknown_jet_order(expanded);
        unsigned power = expanded.degree_in(is_unknown);
        for (const auto& lin : ec.linear)
            order = std::max(order, lin.op.order());
        for (const auto& q : ec.quadratic) {
            order = std::max(order, q.outer.order() + 1);
            power = std::max(power, 2u);
        }
        if (!ec.linear.empty())
            power = std::max(power, 1u);
        DecomposeOptions opt;
        opt.max_order = order;
        opt.max_power = power;
        EquationVerdict v = decompose_operator(expanded, sys.unknown_count(), sys.dim(), opt);
        if (!v.resoluble)
            throw DecompositionFailed("verified MH operator failed to decompose in equation " + std::to_string(b + 1));
        out.equations.push_back(std::move(v.certificate));
    }
    return out;
}

} // namespace jcond
