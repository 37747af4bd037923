#include "jcond/pdemodel.hpp"

#include "jcond/render.hpp"

#include <set>
#include <sstream>

namespace jcond {

namespace {

const char* kind_name(AtomKind k)
{
    switch (k) {
    case AtomKind::Coordinate: return "coordinate";
    case AtomKind::CoeffFn: return "coefficient function";
    case AtomKind::Unknown: return "unknown";
    case AtomKind::Trace: return "trace";
    case AtomKind::Psi: return "psi";
    case AtomKind::Chi: return "chi";
    case AtomKind::Omega: return "omega";
    case AtomKind::Gamma: return "gamma";
    }
    return "?";
}

template <class Allowed>
void check_expr(const Expr& e, const PDESystem& sys, const std::string& where, SourceSpan span, Allowed allowed,
                std::vector<ParseDiagnostic>& out)
{
    std::set<std::string> reported;
    auto report = [&](std::string msg) {
        if (reported.insert(msg).second)
            out.push_back({ParseDiagnostic::Severity::Error, span, std::move(msg)});
    };
    e.for_each_atom([&](const Atom& a) {
        if (!allowed(a.kind))
            report(where + ": " + kind_name(a.kind) + " symbols are not allowed here");
        if (a.has_jet() && a.jet.dim() != sys.dim())
            report(where + ": multi-index of length " + std::to_string(a.jet.dim()) + " in a system of dimension " +
                   std::to_string(sys.dim()));
        if (a.kind == AtomKind::Coordinate && a.index >= sys.dim())
            report(where + ": coordinate index out of range");
        if ((a.kind == AtomKind::Unknown || a.kind == AtomKind::Trace || a.kind == AtomKind::Psi ||
             a.kind == AtomKind::Chi) &&
            a.index >= sys.unknown_count())
            report(where + ": unknown index out of range");
    });
}

} // namespace

std::vector<ParseDiagnostic> validate_system(const PDESystem& sys)
{
    std::vector<ParseDiagnostic> out;
    if (sys.dim() == 0)
        out.push_back({ParseDiagnostic::Severity::Error, {}, "system has dimension 0"});
    if (sys.unknown_count() == 0)
        out.push_back({ParseDiagnostic::Severity::Error, {}, "system declares no unknowns"});
    if (sys.equations.empty())
        out.push_back({ParseDiagnostic::Severity::Error, {}, "system has no equations"});

    auto lhs_ok = [](AtomKind k) {
        return k == AtomKind::Unknown || k == AtomKind::Coordinate || k == AtomKind::CoeffFn;
    };
    auto smooth_ok = [](AtomKind k) { return k == AtomKind::Coordinate || k == AtomKind::CoeffFn; };
    auto closed_ok = [](AtomKind k) { return k == AtomKind::Coordinate; };

    for (std::size_t b = 0; b < sys.equations.size(); ++b) {
        const auto& eq = sys.equations[b];
        std::string where = "equation " + std::to_string(b + 1);
        check_expr(eq.lhs, sys, where, eq.span, lhs_ok, out);
        check_expr(eq.rhs, sys, where + " right-hand side", eq.span, smooth_ok, out);
    }
    if (sys.gamma.closed_form)
        check_expr(*sys.gamma.closed_form, sys, "gamma", {}, closed_ok, out);
    for (const auto& t : sys.traces) {
        if (t.alpha >= sys.unknown_count())
            out.push_back({ParseDiagnostic::Severity::Error, {}, "trace refers to an undeclared unknown"});
        check_expr(t.value, sys, "trace", {}, closed_ok, out);
    }
    if (sys.mh) {
        if (sys.mh->equations.size() != sys.equations.size())
            out.push_back({ParseDiagnostic::Severity::Error, {}, "MH certificate does not cover every equation"});
        for (const auto& eqc : sys.mh->equations) {
            for (const auto& lin : eqc.linear)
                if (lin.alpha >= sys.unknown_count())
                    out.push_back({ParseDiagnostic::Severity::Error, {}, "MH linear part refers to an undeclared unknown"});
            for (const auto& q : eqc.quadratic)
                for (const auto& e : q.entries)
                    if (e.alpha >= sys.unknown_count() || e.alpha_prime >= sys.unknown_count())
                        out.push_back({ParseDiagnostic::Severity::Error, {}, "MH entry refers to an undeclared unknown"});
        }
    }
    return out;
}

const Expr& operator_expr(const PDESystem& sys, std::size_t beta)
{
    if (beta >= sys.equations.size())
        throw std::out_of_range("equation index " + std::to_string(beta + 1) + " out of range 1.." +
                                std::to_string(sys.equations.size()));
    return sys.equations[beta].lhs;
}

namespace {

void list(std::ostream& os, const char* kw, const std::vector<std::string>& v)
{
    if (v.empty())
        return;
    os << kw;
    for (const auto& s : v)
        os << ' ' << s;
    os << '\n';
}

} // namespace

std::string render_system(const PDESystem& sys)
{
    std::ostringstream os;
    const auto& n = sys.names;
    os << "system " << sys.name << '\n';
    list(os, "coords", n.coords);
    list(os, "unknowns", n.unknowns);
    list(os, "coeffs", n.coeffs);
    if (sys.gamma.closed_form)
        os << "gamma: " << render_dsl(*sys.gamma.closed_form, n) << '\n';
    for (const auto& t : sys.traces)
        os << "trace " << (t.side == Side::Minus ? "minus " : "plus ") << n.unknowns[t.alpha] << ": "
           << render_dsl(t.value, n) << '\n';
    for (const auto& [axis, b] : sys.box)
        os << "box " << n.coords[axis] << ": " << render_rational(b.first) << ", " << render_rational(b.second) << '\n';
    for (const auto& eq : sys.equations)
        os << "eq: " << render_dsl(eq.lhs, n) << " = " << render_dsl(eq.rhs, n) << '\n';
    if (sys.mh) {
        for (std::size_t b = 0; b < sys.mh->equations.size(); ++b) {
            const auto& c = sys.mh->equations[b];
            for (const auto& lin : c.linear)
                os << "mh " << b + 1 << " linear " << n.unknowns[lin.alpha] << ": " << render_operator(lin.op, n) << '\n';
            for (const auto& q : c.quadratic) {
                os << "mh " << b + 1 << " quad: " << render_operator(q.outer, n);
                for (const auto& e : q.entries)
                    os << " ; " << n.unknowns[e.alpha] << ' ' << n.unknowns[e.alpha_prime] << ": "
                       << render_operator(e.p.op(), n);
                os << '\n';
            }
        }
    }
    return os.str();
}

} // namespace jcond
