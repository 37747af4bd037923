#include "jcond/linear_op.hpp"

#include <algorithm>

namespace jcond {

LinearOpSpec::LinearOpSpec(std::vector<LinearOpTerm> terms)
{
    // merge repeated derivative indices, drop zero coefficients
    std::map<MultiIndex, Expr> merged;
    std::size_t dim = terms.empty() ? 0 : terms.front().derivative.dim();
    for (auto& t : terms) {
        if (t.derivative.dim() != dim)
            throw std::invalid_argument("linear operator terms of mixed dimension");
        if (t.coefficient.any_atom([](const Atom& a) {
                return a.kind != AtomKind::Coordinate && a.kind != AtomKind::CoeffFn;
            }))
            throw std::invalid_argument("linear operator coefficient must depend on x only");
        merged[t.derivative] += t.coefficient;
    }
    for (auto& [q, c] : merged)
        if (!c.is_zero())
            terms_.push_back({std::move(c), q});
}

unsigned LinearOpSpec::order() const
{
    unsigned m = 0;
    for (const auto& t : terms_)
        m = std::max(m, t.derivative.order());
    return m;
}

LinearOpSpec LinearOpSpec::homogeneous_part(unsigned k) const
{
    LinearOpSpec out;
    for (const auto& t : terms_)
        if (t.derivative.order() == k)
            out.terms_.push_back(t);
    return out;
}

Expr apply_linear_op(const LinearOpSpec& op, const Expr& e)
{
    Expr out;
    for (const auto& t : op.terms())
        out += t.coefficient * derivative_multi(e, t.derivative);
    return out;
}

FirstOrderOp::FirstOrderOp(LinearOpSpec op) : op_(std::move(op))
{
    if (op_.order() > 1)
        throw OrderTooHigh("operator P must have order at most one, got order " + std::to_string(op_.order()));
}

} // namespace jcond
