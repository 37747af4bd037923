#include "jcond/render.hpp"

#include <map>
#include <sstream>

namespace jcond {

std::string render_rational(const Rational& q)
{
    return q.get_str();
}

namespace {

struct Style {
    bool latex = false;
};

std::string jet_subscript(const MultiIndex& p, const SymbolNames& names)
{
    std::string s;
    bool multi_char = false;
    for (std::size_t axis : p.axis_sequence())
        multi_char |= names.coords.at(axis).size() > 1;
    for (std::size_t axis : p.axis_sequence()) {
        if (multi_char && !s.empty())
            s += ',';
        s += names.coords.at(axis);
    }
    return s;
}

std::string latex_name(const std::string& n)
{
    return n.size() == 1 ? n : "\\mathrm{" + n + "}";
}

std::string unknown_name(const SymbolNames& names, std::size_t i)
{
    return i < names.unknowns.size() ? names.unknowns[i] : std::string("_");
}

std::string sub(const std::string& s)
{
    return s.size() == 1 ? "_" + s : "_{" + s + "}";
}

/// LaTeX atom; `needs_parens` set when a power must wrap it.
std::string atom_latex(const Atom& a, const SymbolNames& names, bool& needs_parens)
{
    needs_parens = false;
    const std::string js = a.has_jet() && !a.jet.is_zero() ? jet_subscript(a.jet, names) : std::string();
    switch (a.kind) {
    case AtomKind::Coordinate:
        return latex_name(names.coords.at(a.index));
    case AtomKind::CoeffFn:
        return latex_name(a.name) + (js.empty() ? "" : sub(js));
    case AtomKind::Unknown:
        return latex_name(unknown_name(names, a.index)) + (js.empty() ? "" : sub(js));
    case AtomKind::Trace:
        needs_parens = true;
        return latex_name(unknown_name(names, a.index)) + (a.side == Side::Plus ? "^+" : "^-") +
               (js.empty() ? "" : sub(js));
    case AtomKind::Psi:
    case AtomKind::Chi:
        needs_parens = true;
        return std::string(a.kind == AtomKind::Psi ? "\\psi" : "\\chi") + "^{" + latex_name(unknown_name(names, a.index)) +
               "}" + (js.empty() ? "" : sub(js));
    case AtomKind::Omega:
        return "\\omega" + (js.empty() ? "" : sub(js));
    case AtomKind::Gamma:
        return "\\gamma" + (js.empty() ? "" : sub(js));
    }
    return "?";
}

std::string factor_text(const Factor& f, const SymbolNames& names, const Style& st)
{
    if (!st.latex) {
        std::string s = render_atom_dsl(f.atom, names);
        return f.power == 1 ? s : s + "^" + std::to_string(f.power);
    }
    bool parens = false;
    std::string s = atom_latex(f.atom, names, parens);
    if (f.power == 1)
        return s;
    if (parens)
        s = "(" + s + ")";
    const std::string e = std::to_string(f.power);
    return s + (e.size() == 1 ? "^" + e : "^{" + e + "}");
}

std::string monomial_text(const Monomial& m, const SymbolNames& names, const Style& st)
{
    std::string s;
    for (const auto& f : m.factors()) {
        if (!s.empty())
            s += st.latex ? " " : "*";
        s += factor_text(f, names, st);
    }
    return s;
}

std::string magnitude_text(const Rational& q, const Style& st)
{
    if (!st.latex || q.get_den() == 1)
        return q.get_str();
    return "\\tfrac{" + q.get_num().get_str() + "}{" + q.get_den().get_str() + "}";
}

/// Signed term `c * m`: returns (negative, text of |c|*m).
std::pair<bool, std::string> term_text(const Monomial& m, const Rational& c, const SymbolNames& names, const Style& st)
{
    Rational mag = abs(c);
    std::string body = monomial_text(m, names, st);
    std::string s;
    if (body.empty())
        s = magnitude_text(mag, st);
    else if (mag == 1)
        s = body;
    else
        s = magnitude_text(mag, st) + (st.latex ? " " : "*") + body;
    return {c < 0, s};
}

void append_signed(std::string& out, bool negative, const std::string& text)
{
    if (out.empty())
        out = negative ? "-" + text : text;
    else
        out += (negative ? " - " : " + ") + text;
}

std::string plain_sum(const Expr& e, const SymbolNames& names, const Style& st)
{
    std::string out;
    for (const auto& [m, c] : e.terms()) {
        auto [neg, t] = term_text(m, c, names, st);
        append_signed(out, neg, t);
    }
    return out.empty() ? "0" : out;
}

Rational content(const Expr& e)
{
    mpz_class num = 0, den = 1;
    for (const auto& [m, c] : e.terms()) {
        mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), c.get_num().get_mpz_t());
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den().get_mpz_t());
    }
    Rational q(num, den);
    q.canonicalize();
    if (!e.terms().empty() && e.terms().begin()->second < 0)
        q = -q;
    return q;
}

std::string render(const Expr& e, const SymbolNames& names, const Style& st)
{
    if (e.is_zero())
        return "0";
    std::map<Monomial, Expr> groups;
    for (const auto& [m, c] : e.terms()) {
        auto [g, rest] = m.split([](const Atom& a) { return a.kind == AtomKind::Gamma; });
        groups[g].add_term(rest, c);
    }
    if (groups.size() == 1 && groups.begin()->first.is_one())
        return plain_sum(e, names, st);

    std::string out;
    for (const auto& [g, rest] : groups) {
        if (g.is_one() || rest.size() == 1) {
            for (const auto& [m, c] : rest.terms()) {
                if (g.is_one()) {
                    auto [neg, t] = term_text(m, c, names, st);
                    append_signed(out, neg, t);
                    continue;
                }
                auto [neg, t] = term_text(m, c, names, st);
                std::string gm = monomial_text(g, names, st);
                if (m.is_one() && abs(c) == 1)
                    t = gm;
                else
                    t += (st.latex ? "\\," : "*") + gm;
                append_signed(out, neg, t);
            }
            continue;
        }
        Rational k = content(rest);
        Expr inner = rest * (1 / k);
        std::string t = "(" + plain_sum(inner, names, st) + ")";
        Rational mag = abs(k);
        if (mag != 1)
            t = magnitude_text(mag, st) + (st.latex ? "" : "*") + t;
        t += (st.latex ? "\\," : "*") + monomial_text(g, names, st);
        append_signed(out, k < 0, t);
    }
    return out;
}

} // namespace

std::string render_atom_dsl(const Atom& a, const SymbolNames& names)
{
    std::string base;
    switch (a.kind) {
    case AtomKind::Coordinate:
        return names.coords.at(a.index);
    case AtomKind::CoeffFn: base = a.name; break;
    case AtomKind::Unknown: base = unknown_name(names, a.index); break;
    case AtomKind::Trace: base = (a.side == Side::Plus ? "up_" : "um_") + unknown_name(names, a.index); break;
    case AtomKind::Psi: base = "psi_" + unknown_name(names, a.index); break;
    case AtomKind::Chi: base = "chi_" + unknown_name(names, a.index); break;
    case AtomKind::Omega: base = "omega"; break;
    case AtomKind::Gamma: base = "gamma"; break;
    }
    if (a.jet.is_zero())
        return base;
    return "D[" + axis_list(a.jet) + "]" + base;
}

std::string render_dsl(const Expr& e, const SymbolNames& names) { return render(e, names, Style{false}); }

std::string render_latex(const Expr& e, const SymbolNames& names) { return render(e, names, Style{true}); }

std::string render_operator(const LinearOpSpec& op, const SymbolNames& names)
{
    // express the operator applied to the placeholder `_`
    Expr applied;
    const Atom hole = Atom::unknown(names.unknowns.size(), MultiIndex(names.dim()));
    for (const auto& t : op.terms())
        applied += t.coefficient * Expr(hole.with_jet(t.derivative));
    if (applied.is_zero())
        return "0*_";
    SymbolNames with_hole = names;
    with_hole.unknowns.push_back("_");
    return render_dsl(applied, with_hole);
}

} // namespace jcond
