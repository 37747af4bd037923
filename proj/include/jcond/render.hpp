#pragma once

#include "jcond/expr.hpp"
#include "jcond/linear_op.hpp"
#include "jcond/pdemodel.hpp"

#include <string>

namespace jcond {

/// Expression in the input DSL syntax. Terms are grouped by their gamma-jet
/// part with the rational content pulled out, e.g.
/// `(up_u - um_u)*D[1]gamma + 1/2*(up_u^2 - um_u^2)*D[2]gamma`.
std::string render_dsl(const Expr& e, const SymbolNames& names);

/// DSL spelling of one atom, e.g. `D[1,2]up_u`.
std::string render_atom_dsl(const Atom& a, const SymbolNames& names);

/// LaTeX math fragment with the same grouping as render_dsl.
std::string render_latex(const Expr& e, const SymbolNames& names);

std::string render_rational(const Rational& q);

/// Operator applied to the placeholder `_`, e.g. `D[1]_ - nu*D[2,2]_`.
std::string render_operator(const LinearOpSpec& op, const SymbolNames& names);

} // namespace jcond
