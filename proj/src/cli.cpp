#include "jcond/cli.hpp"

#include "jcond/render.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace jcond {

using nlohmann::json;

std::string atom_name(const DistAtom& a)
{
    switch (a.kind) {
    case DistAtom::Kind::One: return "one";
    case DistAtom::Kind::Heaviside: return "heaviside";
    case DistAtom::Kind::DiracDeriv: return "delta";
    }
    return "one";
}

std::string status_name(ConditionStatus s)
{
    return s == ConditionStatus::Constraint ? "constraint" : "satisfied-by-hypothesis";
}

std::string locus_name(Locus l)
{
    switch (l) {
    case Locus::Everywhere: return "everywhere";
    case Locus::NearGamma: return "near Gamma";
    case Locus::OnGamma: return "on Gamma";
    }
    return "everywhere";
}

std::string render_json(const json& doc) { return doc.dump(2) + "\n"; }

json system_json(const PDESystem& sys)
{
    json eqs = json::array();
    for (const auto& eq : sys.equations)
        eqs.push_back(render_dsl(eq.lhs, sys.names) + " = " + render_dsl(eq.rhs, sys.names));
    return {
        {"name", sys.name},
        {"coords", sys.names.coords},
        {"unknowns", sys.names.unknowns},
        {"coeffs", sys.names.coeffs},
        {"gamma", sys.gamma.closed_form ? json(render_dsl(*sys.gamma.closed_form, sys.names)) : json("symbolic")},
        {"equations", eqs},
    };
}

json verdicts_json(const PDESystem& sys, const ClassifyReport& rep)
{
    json out = json::array();
    for (std::size_t b = 0; b < rep.equations.size(); ++b) {
        const auto& v = rep.equations[b];
        json j = {
            {"beta", b + 1},
            {"verdict", v.resoluble ? "resoluble" : "not-resoluble"},
            {"max_order", v.max_order},
            {"max_power", v.max_power},
        };
        if (v.witness) {
            const Expr w(v.witness->monomial, Rational(1));
            j["witness"] = {
                {"monomial", render_dsl(w, sys.names)},
                {"latex", render_latex(w, sys.names)},
                {"residual", render_dsl(v.witness->residual, sys.names)},
            };
        }
        out.push_back(std::move(j));
    }
    return out;
}

json certificate_json(const PDESystem& sys, const ResolubleCertificate& cert)
{
    json out = json::array();
    for (std::size_t b = 0; b < cert.equations.size(); ++b) {
        json terms = json::array();
        for (const auto& t : cert.equations[b])
            terms.push_back({
                {"multiplier", render_dsl(t.multiplier, sys.names)},
                {"p", t.p.entries()},
                {"power", t.power},
            });
        out.push_back({{"beta", b + 1}, {"method", "resoluble"}, {"terms", terms}});
    }
    return out;
}

json certificate_json(const PDESystem& sys, const MHCertificate& cert)
{
    const auto& u = sys.names.unknowns;
    json out = json::array();
    for (std::size_t b = 0; b < cert.equations.size(); ++b) {
        const auto& ec = cert.equations[b];
        json lin = json::array();
        for (const auto& l : ec.linear)
            lin.push_back({{"unknown", u[l.alpha]}, {"op", render_operator(l.op, sys.names)}});
        json quad = json::array();
        for (const auto& q : ec.quadratic) {
            json entries = json::array();
            for (const auto& e : q.entries)
                entries.push_back({{"left", u[e.alpha]}, {"right", u[e.alpha_prime]},
                                   {"p", render_operator(e.p.op(), sys.names)}});
            quad.push_back({{"outer", render_operator(q.outer, sys.names)}, {"entries", entries}});
        }
        out.push_back({{"beta", b + 1}, {"method", "mh"}, {"linear", lin}, {"quadratic", quad}});
    }
    return out;
}

namespace {

/// Conditions of one equation in output order: Dirac atoms by order, then H, then 1.
std::vector<std::pair<DistAtom, const Condition*>> output_order(const EquationConditions& ec)
{
    std::vector<std::pair<DistAtom, const Condition*>> out;
    for (const auto& [atom, cond] : ec.atoms)
        out.emplace_back(atom, &cond);
    std::stable_sort(out.begin(), out.end(),
                     [](const auto& a, const auto& b) { return a.first.is_dirac() && !b.first.is_dirac(); });
    return out;
}

} // namespace

json conditions_json(const PDESystem& sys, const JunctionConditionSet& conds)
{
    json out = json::array();
    for (std::size_t b = 0; b < conds.equations.size(); ++b)
        for (const auto& [atom, condp] : output_order(conds.equations[b])) {
            const Condition& cond = *condp;
            out.push_back({
                {"beta", b + 1},
                {"atom", atom_name(atom)},
                {"order", atom.order},
                {"coefficient", render_dsl(cond.coefficient, sys.names)},
                {"status", status_name(cond.status)},
                {"locus", locus_name(locus(atom))},
            });
        }
    return out;
}

json report_json(const ResidualReport& rep, std::uint64_t seed)
{
    json tests = json::array();
    for (const auto& t : rep.tests)
        tests.push_back({{"center", t.center}, {"radius", t.radius}, {"straddles", t.straddles}});
    json runs = json::array();
    for (std::size_t e = 0; e < rep.residuals.size(); ++e)
        runs.push_back({{"eps", rep.mollifier.widths[e]}, {"residuals", rep.residuals[e]}});
    json rates = json::array();
    for (const auto& row : rep.rates) {
        json r = json::array();
        for (double v : row)
            r.push_back(std::isfinite(v) ? json(v) : json(nullptr));
        rates.push_back(std::move(r));
    }
    return {
        {"grid", {{"box", {{"lo", rep.grid.box.lo}, {"hi", rep.grid.box.hi}}},
                  {"points", rep.grid.points},
                  {"quadrature", "trapezoid"},
                  {"quadrature_tolerance", rep.grid.quadrature_tolerance}}},
        {"mollifier", {{"profile", "tanh"}, {"widths", rep.mollifier.widths}}},
        {"seed", seed},
        {"test_functions", tests},
        {"runs", runs},
        {"rates", rates},
        {"floor", rep.floor},
        {"verdict", to_string(rep.verdict)},
        {"notes", rep.notes},
    };
}

std::string render_latex_conditions(const PDESystem& sys, const JunctionConditionSet& conds)
{
    std::ostringstream os;
    os << "% " << kSchema << " junction conditions for " << sys.name << "\n";
    if (conds.empty()) {
        os << "\\[ \\text{no junction conditions} \\]\n";
        return os.str();
    }
    os << "\\begin{align*}\n";
    bool first = true;
    for (std::size_t b = 0; b < conds.equations.size(); ++b) {
        for (const auto& [atom, condp] : output_order(conds.equations[b])) {
            const Condition& cond = *condp;
            if (!first)
                os << " \\\\\n";
            first = false;
            const char* where = locus(atom) == Locus::OnGamma ? "on } \\Gamma" : "near } \\Gamma";
            os << "  &\\text{eq. " << b + 1 << ", ";
            if (atom.is_dirac())
                os << (atom.order == 0 ? std::string("\\(\\delta\\)") : "\\(D^{" + std::to_string(atom.order) + "}\\delta\\)");
            else
                os << "\\(H\\)";
            os << ", " << where << ":\\quad " << render_latex(cond.coefficient, sys.names) << " = 0";
            if (cond.status == ConditionStatus::SatisfiedByHypothesis)
                os << " \\quad \\text{(satisfied by hypothesis)}";
        }
    }
    os << "\n\\end{align*}\n";
    return os.str();
}

std::string render_report_table(const ResidualReport& rep)
{
    std::ostringstream os;
    os << std::left << std::setw(6) << "beta" << std::setw(6) << "phi" << std::setw(10) << "straddle";
    for (double e : rep.mollifier.widths)
        os << std::setw(16) << ("eps=" + [&] { std::ostringstream t; t << e; return t.str(); }());
    os << "rate\n";
    const std::size_t eqs = rep.residuals.empty() ? 0 : rep.residuals.front().size();
    for (std::size_t b = 0; b < eqs; ++b) {
        for (std::size_t k = 0; k < rep.tests.size(); ++k) {
            os << std::setw(6) << b + 1 << std::setw(6) << k + 1 << std::setw(10) << (rep.tests[k].straddles ? "yes" : "no");
            for (const auto& run : rep.residuals) {
                std::ostringstream v;
                v << std::scientific << std::setprecision(4) << run[b][k];
                os << std::setw(16) << v.str();
            }
            const double r = rep.rates[b][k];
            if (std::isfinite(r))
                os << std::fixed << std::setprecision(2) << r << std::defaultfloat;
            else
                os << "-";
            os << "\n";
        }
    }
    os << "verdict: " << to_string(rep.verdict) << "\n";
    for (const auto& n : rep.notes)
        os << "note: " << n << "\n";
    return os.str();
}

namespace {

std::optional<PDESystem> parse_or_report(const std::string& source, CommandResult& res)
{
    ParseResult pr = parse_system(source);
    for (const auto& d : pr.diagnostics)
        res.diagnostics += d.format() + "\n";
    if (!pr.ok())
        res.exit_code = ExitInputError;
    return std::move(pr.system);
}

json base_document(const PDESystem& sys)
{
    return {{"schema", kSchema}, {"system", system_json(sys)}};
}

std::string latex_verdicts(const PDESystem& sys, const ClassifyReport& rep)
{
    std::ostringstream os;
    os << "% " << kSchema << " classification of " << sys.name << "\n\\begin{align*}\n";
    for (std::size_t b = 0; b < rep.equations.size(); ++b) {
        const auto& v = rep.equations[b];
        if (b)
            os << " \\\\\n";
        os << "  &\\text{eq. " << b + 1 << ": " << (v.resoluble ? "resoluble" : "not resoluble") << "}";
        if (v.witness)
            os << "\\quad \\text{witness } " << render_latex(Expr(v.witness->monomial, Rational(1)), sys.names);
    }
    os << "\n\\end{align*}\n";
    return os.str();
}

} // namespace

CommandResult cmd_classify(const std::string& source, const CliOptions& opt)
{
    CommandResult res;
    auto sys = parse_or_report(source, res);
    if (!sys)
        return res;
    const ClassifyReport rep = resoluble_decompose(*sys);
    json doc = base_document(*sys);
    doc["verdicts"] = verdicts_json(*sys, rep);
    doc["certificates"] = rep.resoluble() ? certificate_json(*sys, rep.certificate()) : json::array();
    res.output = opt.latex ? latex_verdicts(*sys, rep) : render_json(doc);
    res.exit_code = rep.resoluble() ? ExitOk : ExitNegative;
    return res;
}

CommandResult cmd_junction(const std::string& source, const CliOptions& opt)
{
    CommandResult res;
    auto sys = parse_or_report(source, res);
    if (!sys)
        return res;
    json doc = base_document(*sys);
    JunctionConditionSet conds;
    if (opt.method == JunctionMethod::MH) {
        if (!sys->mh) {
            res.diagnostics += "error: --method mh needs 'mh' certificate declarations in the input\n";
            res.exit_code = ExitNoMHCertificate;
            return res;
        }
        if (!mh_verify(*sys, *sys->mh)) {
            res.diagnostics += "error: the declared MH certificate does not reproduce the operators\n";
            res.exit_code = ExitNoMHCertificate;
            return res;
        }
        json verdicts = json::array();
        for (std::size_t b = 0; b < sys->equation_count(); ++b)
            verdicts.push_back({{"beta", b + 1}, {"verdict", "mh"}});
        doc["verdicts"] = verdicts;
        doc["certificates"] = certificate_json(*sys, *sys->mh);
        conds = derive_junction_conditions(*sys, *sys->mh);
    } else {
        const ClassifyReport rep = resoluble_decompose(*sys);
        doc["verdicts"] = verdicts_json(*sys, rep);
        if (!rep.resoluble()) {
            doc["certificates"] = json::array();
            doc["conditions"] = json::array();
            res.output = opt.latex ? latex_verdicts(*sys, rep) : render_json(doc);
            res.diagnostics += "error: system is not resoluble; no junction conditions derived\n";
            res.exit_code = ExitNegative;
            return res;
        }
        const ResolubleCertificate cert = rep.certificate();
        doc["certificates"] = certificate_json(*sys, cert);
        conds = derive_junction_conditions(*sys, cert);
    }
    doc["conditions"] = conditions_json(*sys, conds);
    res.output = opt.latex ? render_latex_conditions(*sys, conds) : render_json(doc);
    return res;
}

CommandResult cmd_check(const std::string& source, const CliOptions& opt)
{
    CommandResult res;
    auto sys = parse_or_report(source, res);
    if (!sys)
        return res;
    try {
        const ScenarioSpec sc = ScenarioSpec::from_system(*sys, declared_box(*sys));
        const auto points = sample_gamma_points(sc, 16, opt.seed);
        check_gradient(sc, points);
        const auto tests = place_test_functions(sc, opt.seed);
        if (tests.empty())
            throw ScenarioError("could not place test functions inside the box");

        MollifierSpec moll;
        moll.widths = opt.widths;
        GridSpec grid;
        grid.box = sc.box;
        grid.points = opt.grid;
        ResidualReport rep = convergence_study(sc, moll, grid, tests);

        json doc = base_document(*sys);
        json report = report_json(rep, opt.seed);
        const ClassifyReport cls = resoluble_decompose(*sys);
        doc["verdicts"] = verdicts_json(*sys, cls);
        if (cls.resoluble()) {
            const ResolubleCertificate cert = cls.certificate();
            const JunctionConditionSet conds = derive_junction_conditions(*sys, cert);
            doc["certificates"] = certificate_json(*sys, cert);
            doc["conditions"] = conditions_json(*sys, conds);
            report["symbolic"] = {{"gamma_points", points.size()},
                                  {"conditions_hold", conditions_hold_at(conds, sc, points)}};
        } else {
            doc["certificates"] = json::array();
            doc["conditions"] = json::array();
        }
        doc["report"] = report;
        res.output = render_json(doc);
        res.diagnostics += render_report_table(rep);
        switch (rep.verdict) {
        case CheckVerdict::Consistent: res.exit_code = ExitOk; break;
        case CheckVerdict::Violated: res.exit_code = ExitNegative; break;
        case CheckVerdict::Inconclusive: res.exit_code = ExitInconclusive; break;
        }
    } catch (const ScenarioError& e) {
        res.diagnostics += std::string("error: ") + e.what() + "\n";
        res.exit_code = ExitInputError;
    } catch (const GridTooCoarse& e) {
        res.diagnostics += std::string("error: ") + e.what() + "\n";
        res.exit_code = ExitInputError;
    } catch (const std::invalid_argument& e) {
        res.diagnostics += std::string("error: ") + e.what() + "\n";
        res.exit_code = ExitInputError;
    }
    return res;
}

} // namespace jcond
