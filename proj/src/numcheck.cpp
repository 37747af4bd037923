#include "jcond/numcheck.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace jcond {

double MollifierSpec::profile(double s, double eps) { return 0.5 * (1.0 + std::tanh(s / eps)); }

bool Box::contains(const std::vector<double>& x) const
{
    for (std::size_t i = 0; i < lo.size(); ++i)
        if (x[i] < lo[i] || x[i] > hi[i])
            return false;
    return true;
}

Box declared_box(const PDESystem& sys)
{
    Box b{std::vector<double>(sys.dim(), -1.0), std::vector<double>(sys.dim(), 1.0)};
    for (const auto& [axis, bounds] : sys.box) {
        b.lo[axis] = bounds.first.get_d();
        b.hi[axis] = bounds.second.get_d();
    }
    return b;
}

double TestFunction::operator()(const std::vector<double>& x) const
{
    double v = 1.0;
    for (std::size_t i = 0; i < center.size(); ++i) {
        const double s = (x[i] - center[i]) / radius[i];
        if (std::abs(s) >= 1.0)
            return 0.0;
        const double b = 1.0 - s * s;
        v *= b * b * b;
    }
    return v;
}

Box TestFunction::support() const
{
    Box b;
    for (std::size_t i = 0; i < center.size(); ++i) {
        b.lo.push_back(center[i] - radius[i]);
        b.hi.push_back(center[i] + radius[i]);
    }
    return b;
}

CoordinatePoly::CoordinatePoly(const Expr& e)
{
    for (const auto& [m, c] : e.terms()) {
        Term t{c.get_d(), {}};
        for (const auto& f : m.factors()) {
            if (f.atom.kind != AtomKind::Coordinate)
                throw ScenarioError("closed form may only contain coordinates");
            t.powers.emplace_back(f.atom.index, f.power);
        }
        terms_.push_back(std::move(t));
    }
}

double CoordinatePoly::operator()(const double* x) const
{
    double sum = 0.0;
    for (const auto& t : terms_) {
        double v = t.coefficient;
        for (auto [i, p] : t.powers)
            for (unsigned k = 0; k < p; ++k)
                v *= x[i];
        sum += v;
    }
    return sum;
}

namespace {

bool has_coeff_fn(const Expr& e)
{
    return e.any_atom([](const Atom& a) { return a.kind == AtomKind::CoeffFn; });
}

struct GammaEval {
    CoordinatePoly value;
    std::vector<CoordinatePoly> grad;

    explicit GammaEval(const ScenarioSpec& sc) : value(sc.gamma)
    {
        for (std::size_t i = 0; i < sc.dim(); ++i)
            grad.emplace_back(total_derivative(sc.gamma, i));
    }

    double norm_grad(const double* x) const
    {
        double s = 0.0;
        for (const auto& g : grad) {
            const double v = g(x);
            s += v * v;
        }
        return std::sqrt(s);
    }

    /// |gamma| / |grad gamma|, the first-order distance to Gamma.
    double distance(const double* x) const
    {
        const double g = norm_grad(x);
        return g == 0.0 ? std::numeric_limits<double>::infinity() : std::abs(value(x)) / g;
    }
};

std::optional<std::vector<double>> newton_project(const GammaEval& ge, std::vector<double> x)
{
    for (int it = 0; it < 200; ++it) {
        const double v = ge.value(x.data());
        if (std::abs(v) < 1e-13)
            return x;
        std::vector<double> g(x.size());
        double n2 = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            g[i] = ge.grad[i](x.data());
            n2 += g[i] * g[i];
        }
        if (n2 == 0.0)
            return std::nullopt;
        double step = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double d = v * g[i] / n2;
            x[i] -= d;
            step += d * d;
        }
        if (std::sqrt(step) < 1e-15)
            return x;
    }
    return std::nullopt;
}

std::vector<double> uniform_point(const Box& box, std::mt19937_64& rng)
{
    std::vector<double> x(box.dim());
    for (std::size_t i = 0; i < box.dim(); ++i)
        x[i] = std::uniform_real_distribution<double>(box.lo[i], box.hi[i])(rng);
    return x;
}

std::optional<std::vector<double>> random_gamma_point(const ScenarioSpec& sc, const GammaEval& ge, std::mt19937_64& rng)
{
    for (int attempt = 0; attempt < 1000; ++attempt) {
        auto p = newton_project(ge, uniform_point(sc.box, rng));
        if (p && sc.box.contains(*p))
            return p;
    }
    return std::nullopt;
}

bool inside(const Box& outer, const Box& inner)
{
    for (std::size_t i = 0; i < outer.dim(); ++i)
        if (inner.lo[i] < outer.lo[i] || inner.hi[i] > outer.hi[i])
            return false;
    return true;
}

/// Minimal distance to Gamma over a coarse sample of a box.
double min_distance(const GammaEval& ge, const Box& b, std::size_t per_axis = 9)
{
    const std::size_t n = b.dim();
    std::vector<std::size_t> i(n, 0);
    std::vector<double> x(n);
    double best = std::numeric_limits<double>::infinity();
    while (true) {
        for (std::size_t a = 0; a < n; ++a)
            x[a] = b.lo[a] + (b.hi[a] - b.lo[a]) * double(i[a]) / double(per_axis - 1);
        best = std::min(best, ge.distance(x.data()));
        std::size_t a = 0;
        while (a < n && ++i[a] == per_axis)
            i[a++] = 0;
        if (a == n)
            break;
    }
    return best;
}

/// 1-D central stencil of derivative order k with spacing h, as composition
/// of first and second differences.
std::vector<double> stencil(unsigned k, double h)
{
    std::vector<double> s{1.0};
    auto convolve = [&](const std::vector<double>& t) {
        std::vector<double> out(s.size() + t.size() - 1, 0.0);
        for (std::size_t i = 0; i < s.size(); ++i)
            for (std::size_t j = 0; j < t.size(); ++j)
                out[i + j] += s[i] * t[j];
        s = std::move(out);
    };
    for (unsigned i = 0; i < k / 2; ++i)
        convolve({1.0 / (h * h), -2.0 / (h * h), 1.0 / (h * h)});
    if (k % 2)
        convolve({-0.5 / h, 0.0, 0.5 / h});
    return s;
}

struct CompiledOperator {
    struct Term {
        double coefficient;
        std::vector<std::pair<std::size_t, unsigned>> powers; // slot, power
    };
    // slots: coordinates 0..n-1, then jets
    std::vector<Atom> jets;
    std::vector<Term> terms;

    CompiledOperator(const Expr& lhs, const Expr& rhs, std::size_t dim)
    {
        auto slot = [&](const Atom& a) -> std::size_t {
            if (a.kind == AtomKind::Coordinate)
                return a.index;
            if (a.kind != AtomKind::Unknown)
                throw ScenarioError("operator has non-numeric atoms");
            auto it = std::find(jets.begin(), jets.end(), a);
            if (it == jets.end()) {
                jets.push_back(a);
                return dim + jets.size() - 1;
            }
            return dim + std::size_t(it - jets.begin());
        };
        for (const Expr* e : {&lhs, &rhs}) {
            const double sign = e == &lhs ? 1.0 : -1.0;
            for (const auto& [m, c] : e->terms()) {
                Term t{sign * c.get_d(), {}};
                for (const auto& f : m.factors())
                    t.powers.emplace_back(slot(f.atom), f.power);
                terms.push_back(std::move(t));
            }
        }
    }

    double operator()(const std::vector<double>& slots) const
    {
        double sum = 0.0;
        for (const auto& t : terms) {
            double v = t.coefficient;
            for (auto [s, p] : t.powers)
                for (unsigned k = 0; k < p; ++k)
                    v *= slots[s];
            sum += v;
        }
        return sum;
    }
};

std::size_t ghost_layers(const std::vector<CompiledOperator>& ops)
{
    std::size_t pad = 1;
    for (const auto& op : ops)
        for (const auto& a : op.jets)
            for (std::size_t i = 0; i < a.jet.dim(); ++i)
                pad = std::max<std::size_t>(pad, (a.jet[i] + 1) / 2);
    return pad;
}

std::vector<std::size_t> strides(const NodeGrid& g)
{
    const std::size_t n = g.count.size();
    std::vector<std::size_t> s(n, 1);
    for (std::size_t a = n; a-- > 1;)
        s[a - 1] = s[a] * g.padded(a);
    return s;
}

} // namespace

ScenarioSpec ScenarioSpec::from_system(const PDESystem& sys, const Box& box)
{
    if (!sys.gamma.closed_form)
        throw ScenarioError("numerical check needs a closed-form gamma");
    if (box.dim() != sys.dim())
        throw ScenarioError("box dimension does not match the coordinates");
    for (std::size_t i = 0; i < box.dim(); ++i)
        if (!(box.lo[i] < box.hi[i]))
            throw ScenarioError("box bounds must satisfy lo < hi");
    for (const auto& eq : sys.equations)
        if (has_coeff_fn(eq.lhs) || has_coeff_fn(eq.rhs))
            throw ScenarioError("numerical check needs closed-form coefficients");

    ScenarioSpec sc;
    sc.system = &sys;
    sc.gamma = *sys.gamma.closed_form;
    sc.box = box;
    std::vector<std::string> missing;
    for (std::size_t a = 0; a < sys.unknown_count(); ++a) {
        const TraceDecl* m = sys.find_trace(Side::Minus, a);
        const TraceDecl* p = sys.find_trace(Side::Plus, a);
        if (!m)
            missing.push_back("trace minus " + sys.names.unknowns[a]);
        if (!p)
            missing.push_back("trace plus " + sys.names.unknowns[a]);
        sc.minus.push_back(m ? m->value : Expr{});
        sc.plus.push_back(p ? p->value : Expr{});
    }
    if (!missing.empty()) {
        std::string msg = "missing trace declarations:";
        for (const auto& s : missing)
            msg += " " + s + ";";
        msg.pop_back();
        throw ScenarioError(msg);
    }
    for (const auto& e : sc.minus)
        CoordinatePoly{e};
    for (const auto& e : sc.plus)
        CoordinatePoly{e};
    CoordinatePoly{sc.gamma};
    return sc;
}

std::vector<std::vector<double>> sample_gamma_points(const ScenarioSpec& sc, std::size_t count, std::uint64_t seed)
{
    const GammaEval ge(sc);
    std::mt19937_64 rng(seed);
    std::vector<std::vector<double>> pts;
    for (std::size_t k = 0; k < count; ++k) {
        auto p = random_gamma_point(sc, ge, rng);
        if (!p)
            break;
        pts.push_back(std::move(*p));
    }
    if (pts.empty())
        throw ScenarioError("gamma has no zero inside the box");
    return pts;
}

void check_gradient(const ScenarioSpec& sc, const std::vector<std::vector<double>>& points)
{
    const GammaEval ge(sc);
    for (const auto& p : points) {
        if (ge.norm_grad(p.data()) < 1e-6) {
            std::ostringstream os;
            os << "grad gamma vanishes at the Gamma point (";
            for (std::size_t i = 0; i < p.size(); ++i)
                os << (i ? ", " : "") << p[i];
            os << ")";
            throw GradientDegenerate(os.str());
        }
    }
}

std::vector<TestFunction> place_test_functions(const ScenarioSpec& sc, std::uint64_t seed, std::size_t straddling,
                                               std::size_t away)
{
    const GammaEval ge(sc);
    const std::size_t n = sc.dim();
    std::mt19937_64 rng(seed);
    auto unit = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
    auto random_radius = [&](double lo, double hi) {
        std::vector<double> r(n);
        for (std::size_t i = 0; i < n; ++i)
            r[i] = (sc.box.hi[i] - sc.box.lo[i]) * unit(lo, hi);
        return r;
    };

    std::vector<TestFunction> out;
    for (std::size_t k = 0, attempts = 0; k < straddling && attempts < 5000; ++attempts) {
        auto p = random_gamma_point(sc, ge, rng);
        if (!p)
            break;
        TestFunction tf{*p, random_radius(0.2, 0.3), true};
        for (std::size_t i = 0; i < n; ++i)
            tf.center[i] += unit(-0.3, 0.3) * tf.radius[i];
        const double rmin = *std::min_element(tf.radius.begin(), tf.radius.end());
        if (!inside(sc.box, tf.support()) || ge.distance(tf.center.data()) > 0.5 * rmin)
            continue;
        out.push_back(std::move(tf));
        ++k;
    }
    for (std::size_t k = 0, attempts = 0; k < away && attempts < 5000; ++attempts) {
        TestFunction tf{uniform_point(sc.box, rng), random_radius(0.1, 0.2), false};
        if (!inside(sc.box, tf.support()) || min_distance(ge, tf.support()) < 0.25)
            continue;
        out.push_back(std::move(tf));
        ++k;
    }
    return out;
}

std::size_t NodeGrid::padded_size() const
{
    std::size_t s = 1;
    for (std::size_t a = 0; a < count.size(); ++a)
        s *= padded(a);
    return s;
}

void NodeGrid::coordinates(const std::vector<std::size_t>& i, std::vector<double>& x) const
{
    x.resize(i.size());
    for (std::size_t a = 0; a < i.size(); ++a)
        x[a] = lo[a] + (double(i[a]) - double(pad)) * step[a];
}

std::vector<std::vector<double>> mollified_field(const ScenarioSpec& sc, double eps, const NodeGrid& grid)
{
    const std::size_t n = sc.dim();
    const std::size_t a = sc.minus.size();
    const CoordinatePoly gamma(sc.gamma);
    std::vector<CoordinatePoly> minus, plus;
    std::vector<bool> same;
    for (std::size_t k = 0; k < a; ++k) {
        minus.emplace_back(sc.minus[k]);
        plus.emplace_back(sc.plus[k]);
        same.push_back(sc.minus[k] == sc.plus[k]);
    }

    std::vector<std::vector<double>> out(a, std::vector<double>(grid.padded_size()));
    std::vector<std::size_t> i(n, 0);
    std::vector<double> x;
    for (std::size_t flat = 0; flat < grid.padded_size(); ++flat) {
        grid.coordinates(i, x);
        const double h = MollifierSpec::profile(gamma(x.data()), eps);
        for (std::size_t k = 0; k < a; ++k) {
            const double um = minus[k](x.data());
            out[k][flat] = same[k] ? um : um + (plus[k](x.data()) - um) * h;
        }
        for (std::size_t ax = n; ax-- > 0;) {
            if (++i[ax] < grid.padded(ax))
                break;
            i[ax] = 0;
        }
    }
    return out;
}

std::vector<std::vector<double>> weak_residual(const ScenarioSpec& sc, double eps,
                                               const std::vector<TestFunction>& tests, const GridSpec& grid)
{
    if (grid.points < 8)
        throw std::invalid_argument("grid needs at least 8 points per axis");
    const PDESystem& sys = *sc.system;
    const std::size_t n = sc.dim();
    std::vector<CompiledOperator> ops;
    for (const auto& eq : sys.equations)
        ops.emplace_back(eq.lhs, eq.rhs, n);
    const std::size_t pad = ghost_layers(ops);
    const GammaEval ge(sc);

    std::vector<std::vector<double>> residual(ops.size(), std::vector<double>(tests.size(), 0.0));
    for (std::size_t k = 0; k < tests.size(); ++k) {
        const TestFunction& tf = tests[k];
        Box patch = tf.support();
        for (std::size_t a = 0; a < n; ++a) {
            patch.lo[a] = std::max(patch.lo[a], grid.box.lo[a]);
            patch.hi[a] = std::min(patch.hi[a], grid.box.hi[a]);
        }
        NodeGrid ng;
        ng.pad = pad;
        for (std::size_t a = 0; a < n; ++a) {
            ng.lo.push_back(patch.lo[a]);
            ng.step.push_back((patch.hi[a] - patch.lo[a]) / double(grid.points - 1));
            ng.count.push_back(grid.points);
        }
        const double max_step = *std::max_element(ng.step.begin(), ng.step.end());
        if (max_step > eps / 4.0 && min_distance(ge, patch, 17) < 5.0 * eps) {
            std::ostringstream os;
            os << "grid spacing " << max_step << " exceeds eps/4 = " << eps / 4.0 << " near Gamma";
            throw GridTooCoarse(os.str());
        }

        const auto field = mollified_field(sc, eps, ng);
        const auto stride = strides(ng);

        // jet stencils: (flat offset, weight)
        std::vector<std::vector<std::vector<std::pair<std::ptrdiff_t, double>>>> stencils(ops.size());
        for (std::size_t b = 0; b < ops.size(); ++b) {
            for (const auto& jet : ops[b].jets) {
                std::vector<std::pair<std::ptrdiff_t, double>> st{{0, 1.0}};
                for (std::size_t a = 0; a < n; ++a) {
                    const auto w = stencil(jet.jet[a], ng.step[a]);
                    const std::ptrdiff_t half = std::ptrdiff_t(w.size() / 2);
                    std::vector<std::pair<std::ptrdiff_t, double>> next;
                    for (const auto& [off, wt] : st)
                        for (std::size_t j = 0; j < w.size(); ++j)
                            if (w[j] != 0.0)
                                next.emplace_back(off + (std::ptrdiff_t(j) - half) * std::ptrdiff_t(stride[a]),
                                                  wt * w[j]);
                    st = std::move(next);
                }
                stencils[b].push_back(std::move(st));
            }
        }

        std::vector<std::size_t> i(n, 0);
        std::vector<double> x(n), slots;
        std::vector<double> sums(ops.size(), 0.0);
        while (true) {
            std::size_t flat = 0;
            double weight = 1.0;
            for (std::size_t a = 0; a < n; ++a) {
                flat += (i[a] + pad) * stride[a];
                x[a] = ng.lo[a] + double(i[a]) * ng.step[a];
                weight *= ng.step[a] * ((i[a] == 0 || i[a] + 1 == ng.count[a]) ? 0.5 : 1.0);
            }
            const double phi = tf(x);
            if (phi != 0.0) {
                for (std::size_t b = 0; b < ops.size(); ++b) {
                    slots.assign(x.begin(), x.end());
                    for (std::size_t j = 0; j < ops[b].jets.size(); ++j) {
                        const auto& values = field[ops[b].jets[j].index];
                        double d = 0.0;
                        for (const auto& [off, wt] : stencils[b][j])
                            d += wt * values[std::size_t(std::ptrdiff_t(flat) + off)];
                        slots.push_back(d);
                    }
                    sums[b] += weight * phi * ops[b](slots);
                }
            }
            std::size_t a = n;
            while (a-- > 0) {
                if (++i[a] < ng.count[a])
                    break;
                i[a] = 0;
            }
            if (a == std::size_t(-1))
                break;
        }
        for (std::size_t b = 0; b < ops.size(); ++b)
            residual[b][k] = sums[b];
    }
    return residual;
}

std::string to_string(CheckVerdict v)
{
    switch (v) {
    case CheckVerdict::Consistent: return "consistent";
    case CheckVerdict::Violated: return "violated";
    case CheckVerdict::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

CheckVerdict classify_residuals(const std::vector<std::vector<std::vector<double>>>& residuals, double floor)
{
    constexpr double factor = 1.5;
    if (residuals.size() < 2)
        return CheckVerdict::Inconclusive;
    bool all_shrink = true;
    bool plateau = false;
    const std::size_t eqs = residuals.front().size();
    for (std::size_t b = 0; b < eqs; ++b) {
        for (std::size_t k = 0; k < residuals.front()[b].size(); ++k) {
            for (std::size_t e = 1; e < residuals.size(); ++e) {
                const double prev = std::abs(residuals[e - 1][b][k]);
                const double cur = std::abs(residuals[e][b][k]);
                if (!(cur <= floor || cur * factor <= prev))
                    all_shrink = false;
            }
            const double last = std::abs(residuals.back()[b][k]);
            const double before = std::abs(residuals[residuals.size() - 2][b][k]);
            if (last > floor && last * factor > before)
                plateau = true;
        }
    }
    if (all_shrink)
        return CheckVerdict::Consistent;
    return plateau ? CheckVerdict::Violated : CheckVerdict::Inconclusive;
}

ResidualReport convergence_study(const ScenarioSpec& sc, const MollifierSpec& moll, const GridSpec& grid,
                                 const std::vector<TestFunction>& tests)
{
    if (moll.widths.size() < 3)
        throw std::invalid_argument("convergence study needs at least 3 widths");
    for (std::size_t e = 0; e < moll.widths.size(); ++e)
        if (!(moll.widths[e] > 0.0) || (e && !(moll.widths[e] < moll.widths[e - 1])))
            throw std::invalid_argument("widths must be positive and strictly descending");

    ResidualReport rep;
    rep.mollifier = moll;
    rep.grid = grid;
    rep.tests = tests;
    rep.floor = 10.0 * grid.quadrature_tolerance;
    for (double eps : moll.widths)
        rep.residuals.push_back(weak_residual(sc, eps, tests, grid));

    const std::size_t eqs = sc.system->equation_count();
    rep.rates.assign(eqs, std::vector<double>(tests.size(), std::numeric_limits<double>::quiet_NaN()));
    for (std::size_t b = 0; b < eqs; ++b) {
        for (std::size_t k = 0; k < tests.size(); ++k) {
            std::vector<std::pair<double, double>> pts;
            for (std::size_t e = 0; e < moll.widths.size(); ++e) {
                const double r = std::abs(rep.residuals[e][b][k]);
                if (r > rep.floor)
                    pts.emplace_back(std::log(moll.widths[e]), std::log(r));
            }
            if (pts.size() < 2)
                continue;
            double mx = 0, my = 0;
            for (auto [x, y] : pts) {
                mx += x;
                my += y;
            }
            mx /= double(pts.size());
            my /= double(pts.size());
            double sxy = 0, sxx = 0;
            for (auto [x, y] : pts) {
                sxy += (x - mx) * (y - my);
                sxx += (x - mx) * (x - mx);
            }
            rep.rates[b][k] = sxy / sxx;
        }
    }
    rep.verdict = classify_residuals(rep.residuals, rep.floor);
    if (!traces_are_classical(sc))
        rep.notes.push_back("declared traces are not classical solutions of the system");
    return rep;
}

double evaluate_condition(const Expr& coefficient, const ScenarioSpec& sc, const std::vector<double>& x)
{
    return evaluate(coefficient, [&](const Atom& a) -> double {
        switch (a.kind) {
        case AtomKind::Coordinate: return x[a.index];
        case AtomKind::Trace: {
            const Expr& base = a.side == Side::Plus ? sc.plus[a.index] : sc.minus[a.index];
            return CoordinatePoly(derivative_multi(base, a.jet))(x.data());
        }
        case AtomKind::Gamma: return CoordinatePoly(derivative_multi(sc.gamma, a.jet))(x.data());
        default: throw ScenarioError("condition has atoms without numerical value");
        }
    });
}

bool conditions_hold_at(const JunctionConditionSet& conds, const ScenarioSpec& sc,
                        const std::vector<std::vector<double>>& points, double tol)
{
    for (const auto& ec : conds.equations)
        for (const auto& [atom, cond] : ec.atoms)
            for (const auto& p : points)
                if (std::abs(evaluate_condition(cond.coefficient, sc, p)) >= tol)
                    return false;
    return true;
}

bool traces_are_classical(const ScenarioSpec& sc)
{
    const PDESystem& sys = *sc.system;
    const std::size_t n = sc.dim();
    for (const auto* side : {&sc.minus, &sc.plus}) {
        Bindings b;
        for (std::size_t a = 0; a < side->size(); ++a)
            b.emplace(Atom::unknown(a, MultiIndex(n)), (*side)[a]);
        for (const auto& eq : sys.equations)
            if (!(substitute(eq.lhs, b, JetClosure::Automatic) - eq.rhs).is_zero())
                return false;
    }
    return true;
}

} // namespace jcond
