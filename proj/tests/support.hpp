#pragma once

#include "jcond/classify.hpp"
#include "jcond/distalg.hpp"
#include "jcond/pdemodel.hpp"
#include "jcond/render.hpp"

#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

namespace jtest {

using namespace jcond;

inline std::string read_data(const std::string& name)
{
    std::ifstream in(std::string(JCOND_TEST_DATA) + "/" + name, std::ios::binary);
    if (!in)
        throw std::runtime_error("missing test data " + name);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline PDESystem parse_ok(const std::string& text)
{
    ParseResult r = parse_system(text);
    if (!r.ok()) {
        std::string msg;
        for (const auto& d : r.diagnostics)
            msg += d.format() + "\n";
        throw std::runtime_error("parse failed:\n" + msg);
    }
    return *r.system;
}

inline PDESystem load(const std::string& name) { return parse_ok(read_data(name)); }

inline Expr ex(const std::string& text, const SymbolNames& names)
{
    ExprParseResult r = parse_expression(text, names);
    if (!r.expr)
        throw std::runtime_error("bad expression: " + text + (r.diagnostics.empty() ? "" : " (" + r.diagnostics[0].message + ")"));
    return *r.expr;
}

inline SymbolNames tx_names(std::vector<std::string> unknowns = {"u"})
{
    return SymbolNames{{"t", "x"}, std::move(unknowns), {}};
}

inline MultiIndex mi(std::initializer_list<unsigned> e) { return MultiIndex(e); }

/// Random polynomial over the given atoms, small integer coefficients.
inline Expr random_expr(std::mt19937& rng, const std::vector<Atom>& atoms, int terms = 4, int max_degree = 3)
{
    std::uniform_int_distribution<int> coef(-3, 3);
    std::uniform_int_distribution<int> deg(0, max_degree);
    std::uniform_int_distribution<std::size_t> pick(0, atoms.size() - 1);
    Expr e;
    for (int k = 0; k < terms; ++k) {
        Expr m = Expr(coef(rng));
        for (int d = deg(rng); d > 0; --d)
            m *= Expr(atoms[pick(rng)]);
        e += m;
    }
    return e;
}

/// Smooth coefficient: small integer, optionally times a coordinate.
inline Expr random_coefficient(std::mt19937& rng, std::size_t dim)
{
    std::uniform_int_distribution<int> c(-2, 2);
    std::uniform_int_distribution<std::size_t> axis(0, dim);
    Expr e(c(rng));
    if (const std::size_t a = axis(rng); a < dim)
        e *= Expr(Atom::coordinate(a));
    return e;
}

inline LinearOpSpec random_linear_op(std::mt19937& rng, std::size_t dim, unsigned max_order, int max_terms = 3)
{
    const auto indices = multi_indices_up_to(dim, max_order);
    std::uniform_int_distribution<std::size_t> pick(0, indices.size() - 1);
    std::uniform_int_distribution<int> count(1, max_terms);
    std::map<MultiIndex, Expr> acc;
    for (int k = count(rng); k > 0; --k)
        acc[indices[pick(rng)]] += random_coefficient(rng, dim);
    std::vector<LinearOpTerm> terms;
    for (auto& [q, c] : acc)
        if (!c.is_zero())
            terms.push_back({c, q});
    if (terms.empty())
        terms.push_back({Expr(1), indices[pick(rng)]});
    return LinearOpSpec(std::move(terms));
}

/// Random quadratic MH system: n <= 2 coordinates, a <= 2 unknowns, operators
/// of order <= 2 built as sums L U + L[U P U] with P of order <= 1. The
/// declared certificate is the generating one.
inline PDESystem random_mh_system(std::mt19937& rng)
{
    std::uniform_int_distribution<std::size_t> small(1, 2);
    const std::size_t dim = small(rng);
    const std::size_t unknowns = small(rng);
    PDESystem sys;
    sys.name = "random";
    sys.names.coords = dim == 1 ? std::vector<std::string>{"x"} : std::vector<std::string>{"t", "x"};
    sys.names.unknowns = unknowns == 1 ? std::vector<std::string>{"u"} : std::vector<std::string>{"u", "b"};
    MHCertificate cert;
    std::uniform_int_distribution<std::size_t> which(0, unknowns - 1);
    std::uniform_int_distribution<int> coin(0, 1);
    for (std::size_t beta = 0; beta < unknowns; ++beta) {
        Expr lhs;
        MHEquationCert eq;
        while (lhs.degree_in([](const Atom& a) { return a.kind == AtomKind::Unknown; }) != 2) {
            eq = {};
            for (std::size_t alpha = 0; alpha < unknowns; ++alpha)
                if (coin(rng))
                    eq.linear.push_back({alpha, random_linear_op(rng, dim, 2)});
            for (int q = 1 + coin(rng); q > 0; --q) {
                MHQuadTerm t{random_linear_op(rng, dim, 1, 2), {}};
                for (int e = 1 + coin(rng); e > 0; --e)
                    t.entries.push_back({which(rng), which(rng), FirstOrderOp(random_linear_op(rng, dim, 1, 2))});
                eq.quadratic.push_back(std::move(t));
            }
            lhs = expand_mh(eq, dim);
        }
        sys.equations.push_back({lhs, Expr{}, {}});
        cert.equations.push_back(std::move(eq));
    }
    sys.mh = std::move(cert);
    return sys;
}

/// One rewrite step chosen at random: a single gamma factor is removed from one
/// monomial of one Dirac coefficient.
inline bool random_step(std::map<unsigned, Expr>& parts, std::size_t dim, std::mt19937& rng)
{
    const Atom gv = Atom::gamma(MultiIndex(dim));
    std::vector<std::pair<unsigned, Monomial>> redexes;
    for (const auto& [l, c] : parts)
        for (const auto& [m, q] : c.terms())
            if (m.power_of(gv) > 0)
                redexes.emplace_back(l, m);
    if (redexes.empty())
        return false;
    const auto [l, m] = redexes[std::uniform_int_distribution<std::size_t>(0, redexes.size() - 1)(rng)];
    const Rational q = parts[l].terms().at(m);
    parts[l] -= Expr(m, q);
    if (l > 0)
        parts[l - 1] += Expr(m.without(gv), q * Rational(-static_cast<int>(l)));
    for (auto it = parts.begin(); it != parts.end();)
        it = it->second.is_zero() ? parts.erase(it) : std::next(it);
    return true;
}

/// Normal form of a Dirac sum by exhaustive random single-step rewriting.
inline GenExpr random_rewrite_normal_form(const GenExpr& g, std::size_t dim, std::mt19937& rng)
{
    std::map<unsigned, Expr> parts;
    for (const auto& [a, c] : g.parts())
        parts[a.order] += c;
    while (random_step(parts, dim, rng)) {
    }
    GenExpr out;
    for (const auto& [l, c] : parts)
        out.add(DistAtom::dirac(l), c);
    return out;
}

} // namespace jtest
