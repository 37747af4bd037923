#pragma once

#include "jcond/expr.hpp"

#include <stdexcept>
#include <vector>

namespace jcond {

struct LinearOpTerm {
    Expr coefficient; // Coordinate and CoeffFn atoms only
    MultiIndex derivative;

    friend bool operator==(const LinearOpTerm&, const LinearOpTerm&) = default;
};

/// Linear differential operator sum_q c_q(x) D^q with smooth coefficients.
class LinearOpSpec {
public:
    LinearOpSpec() = default;
    explicit LinearOpSpec(std::vector<LinearOpTerm> terms); // throws std::invalid_argument

    static LinearOpSpec identity(std::size_t dim) { return LinearOpSpec({{Expr::one(), MultiIndex(dim)}}); }
    static LinearOpSpec partial(std::size_t dim, std::size_t axis)
    {
        return LinearOpSpec({{Expr::one(), MultiIndex::unit(dim, axis)}});
    }

    const std::vector<LinearOpTerm>& terms() const { return terms_; }
    unsigned order() const;

    /// Part of order exactly `k`.
    LinearOpSpec homogeneous_part(unsigned k) const;

    friend bool operator==(const LinearOpSpec&, const LinearOpSpec&) = default;

private:
    std::vector<LinearOpTerm> terms_;
};

/// sum_q c_q * D^q e
Expr apply_linear_op(const LinearOpSpec& op, const Expr& e);

/// LinearOpSpec of order at most one. Construction rejects higher orders.
class FirstOrderOp {
public:
    explicit FirstOrderOp(LinearOpSpec op);
    const LinearOpSpec& op() const { return op_; }
    /// First-order homogeneous part.
    LinearOpSpec principal() const { return op_.homogeneous_part(1); }

    friend bool operator==(const FirstOrderOp&, const FirstOrderOp&) = default;

private:
    LinearOpSpec op_;
};

class OrderTooHigh : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace jcond
