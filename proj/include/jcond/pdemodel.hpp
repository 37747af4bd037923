#pragma once

#include "jcond/certificates.hpp"
#include "jcond/expr.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace jcond {

/// Names used to read and print atoms of one system.
struct SymbolNames {
    std::vector<std::string> coords;
    std::vector<std::string> unknowns;
    std::vector<std::string> coeffs;

    std::size_t dim() const { return coords.size(); }
};

struct SourceSpan {
    std::size_t line = 1;
    std::size_t column = 1;
    std::size_t length = 0;
};

struct ParseDiagnostic {
    enum class Severity { Error, Warning };
    Severity severity = Severity::Error;
    SourceSpan span;
    std::string message;

    std::string format() const;
};

struct Equation {
    Expr lhs; // T_beta over Unknown, Coordinate and CoeffFn atoms
    Expr rhs; // f_beta over Coordinate and CoeffFn atoms
    SourceSpan span;
};

/// Singularity hypersurface Gamma = {gamma = 0}. With no closed form, gamma is
/// an opaque symbol with jets.
///
/// Preconditions that are documented rather than checked: Gamma has zero
/// Lebesgue measure and grad gamma does not vanish on Gamma. numcheck spot-checks
/// the gradient condition for closed forms.
struct GammaSpec {
    std::optional<Expr> closed_form;
    bool symbolic() const { return !closed_form.has_value(); }
};

struct TraceDecl {
    Side side = Side::Minus;
    std::size_t alpha = 0;
    Expr value; // closed form in coordinates
};

struct PDESystem {
    std::string name;
    SymbolNames names;
    std::vector<Equation> equations;
    GammaSpec gamma;
    std::vector<TraceDecl> traces;
    std::optional<MHCertificate> mh; // from `mh` declarations
    std::map<std::size_t, std::pair<Rational, Rational>> box; // axis -> bounds, for numerical checks

    std::size_t dim() const { return names.dim(); }
    std::size_t unknown_count() const { return names.unknowns.size(); }
    std::size_t equation_count() const { return equations.size(); }

    const TraceDecl* find_trace(Side side, std::size_t alpha) const;
};

struct ParseResult {
    std::optional<PDESystem> system;
    std::vector<ParseDiagnostic> diagnostics;

    bool ok() const { return system.has_value(); }
};

/// Parses the system DSL. On any error the system is absent and every problem
/// is listed with its source span. A successful result also passes validate_system.
ParseResult parse_system(std::string_view text);

struct ExprParseResult {
    std::optional<Expr> expr;
    std::vector<ParseDiagnostic> diagnostics;
};

/// Parses a single DSL expression against the names of a system. Besides the
/// declared names this accepts the derived symbols `gamma`, `omega`, and
/// `up_<u>`, `um_<u>`, `psi_<u>`, `chi_<u>` for each unknown `<u>`.
ExprParseResult parse_expression(std::string_view text, const SymbolNames& names);

/// Shape checks of a polynomial system; empty iff every invariant holds.
std::vector<ParseDiagnostic> validate_system(const PDESystem& sys);

/// T_beta as a canonical Expr; beta is 0-based. Throws std::out_of_range.
const Expr& operator_expr(const PDESystem& sys, std::size_t beta);

/// DSL source for the system; reparses to equal operators.
std::string render_system(const PDESystem& sys);

} // namespace jcond
