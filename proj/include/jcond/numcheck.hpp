#pragma once

#include "jcond/junction.hpp"
#include "jcond/pdemodel.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace jcond {

class ScenarioError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class GradientDegenerate : public ScenarioError {
public:
    using ScenarioError::ScenarioError;
};

class GridTooCoarse : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// s -> (1 + tanh(s / eps)) / 2 over a descending list of widths.
struct MollifierSpec {
    std::vector<double> widths{0.1, 0.05, 0.025};

    static double profile(double s, double eps);
};

struct Box {
    std::vector<double> lo;
    std::vector<double> hi;

    std::size_t dim() const { return lo.size(); }
    bool contains(const std::vector<double>& x) const;
};

/// Box declared by the system's `box` lines; undeclared axes default to [-1, 1].
Box declared_box(const PDESystem& sys);

/// Tensor-product trapezoid quadrature; `points` nodes per axis over each
/// test-function support.
struct GridSpec {
    Box box;
    std::size_t points = 400;
    double quadrature_tolerance = 1e-6;
};

/// Product of per-axis bumps (1 - ((x - c) / r)^2)^3, zero outside |x - c| < r.
struct TestFunction {
    std::vector<double> center;
    std::vector<double> radius;
    bool straddles = false;

    double operator()(const std::vector<double>& x) const;
    Box support() const;
};

/// Polynomial in coordinates compiled for fast evaluation.
class CoordinatePoly {
public:
    CoordinatePoly() = default;
    explicit CoordinatePoly(const Expr& e); // throws ScenarioError on non-coordinate atoms
    double operator()(const double* x) const;

private:
    struct Term {
        double coefficient;
        std::vector<std::pair<std::size_t, unsigned>> powers;
    };
    std::vector<Term> terms_;
};

/// Closed-form data of a numerical check: the system plus gamma and traces.
struct ScenarioSpec {
    const PDESystem* system = nullptr;
    Expr gamma;
    std::vector<Expr> minus; // per unknown
    std::vector<Expr> plus;
    Box box;

    /// Throws ScenarioError when gamma or a trace is missing or not closed-form.
    static ScenarioSpec from_system(const PDESystem& sys, const Box& box);

    std::size_t dim() const { return system->dim(); }
};

/// Points of Gamma inside the box, by Newton projection of random samples.
std::vector<std::vector<double>> sample_gamma_points(const ScenarioSpec& sc, std::size_t count, std::uint64_t seed);

/// Throws GradientDegenerate if grad gamma vanishes at a sampled point of Gamma.
void check_gradient(const ScenarioSpec& sc, const std::vector<std::vector<double>>& points);

/// Random test functions: `straddling` supports crossing Gamma with radii 20-30%
/// of the box extent per axis, `away` supports with radii 10-20% at distance
/// >= 0.25 from Gamma (measured by |gamma| / |grad gamma|).
std::vector<TestFunction> place_test_functions(const ScenarioSpec& sc, std::uint64_t seed,
                                               std::size_t straddling = 5, std::size_t away = 2);

/// Tensor grid of nodes with `pad` ghost layers on each side.
struct NodeGrid {
    std::vector<double> lo;    // first core node
    std::vector<double> step;
    std::vector<std::size_t> count; // core nodes per axis
    std::size_t pad = 0;

    std::size_t padded(std::size_t axis) const { return count[axis] + 2 * pad; }
    std::size_t padded_size() const;
    /// Coordinates of padded node with multi-index `i` (0 .. padded-1 per axis).
    void coordinates(const std::vector<std::size_t>& i, std::vector<double>& x) const;
};

/// U_eps = U_- + (U_+ - U_-) profile(gamma / eps), per unknown, at padded nodes
/// in row-major order.
std::vector<std::vector<double>> mollified_field(const ScenarioSpec& sc, double eps, const NodeGrid& grid);

/// residual[beta][k] = integral of (T_beta(U_eps) - f_beta) phi_k, derivatives by
/// second-order central differences.
std::vector<std::vector<double>> weak_residual(const ScenarioSpec& sc, double eps,
                                               const std::vector<TestFunction>& tests, const GridSpec& grid);

enum class CheckVerdict { Consistent, Violated, Inconclusive };

std::string to_string(CheckVerdict v);

struct ResidualReport {
    MollifierSpec mollifier;
    GridSpec grid;
    std::vector<TestFunction> tests;
    /// residuals[e][beta][k] for width e, equation beta, test function k
    std::vector<std::vector<std::vector<double>>> residuals;
    /// Fitted slope of log|residual| against log eps, per [beta][k]; NaN if at the floor.
    std::vector<std::vector<double>> rates;
    double floor = 0.0;
    CheckVerdict verdict = CheckVerdict::Inconclusive;
    std::vector<std::string> notes;
};

/// Verdict rule: consistent if every residual shrinks by >= 1.5 per step (or
/// sits under the floor), violated if some residual stays above the floor
/// without shrinking at the last step, inconclusive otherwise.
ResidualReport convergence_study(const ScenarioSpec& sc, const MollifierSpec& moll, const GridSpec& grid,
                                 const std::vector<TestFunction>& tests);

CheckVerdict classify_residuals(const std::vector<std::vector<std::vector<double>>>& residuals, double floor);

/// Numerical value of a junction coefficient at a point, with traces and gamma
/// replaced by their closed forms.
double evaluate_condition(const Expr& coefficient, const ScenarioSpec& sc, const std::vector<double>& x);

/// True iff every condition evaluates below `tol` in magnitude at every point.
bool conditions_hold_at(const JunctionConditionSet& conds, const ScenarioSpec& sc,
                        const std::vector<std::vector<double>>& points, double tol = 1e-8);

/// Are the declared traces classical solutions (T(U_pm) = f symbolically)?
bool traces_are_classical(const ScenarioSpec& sc);

} // namespace jcond
