#pragma once

#include "jcond/linear_op.hpp"

#include <vector>

namespace jcond {

/// L applied to U_alpha: the linear part of an (MH) operator.
struct MHLinearTerm {
    std::size_t alpha = 0;
    LinearOpSpec op;
};

/// U_alpha * (P U_alpha'), P of order at most one.
struct MHQuadEntry {
    std::size_t alpha = 0;
    std::size_t alpha_prime = 0;
    FirstOrderOp p;
};

/// L [ sum_{alpha, alpha'} U_alpha P_{alpha, alpha'} U_alpha' ]
struct MHQuadTerm {
    LinearOpSpec outer;
    std::vector<MHQuadEntry> entries;
};

struct MHEquationCert {
    std::vector<MHLinearTerm> linear;
    std::vector<MHQuadTerm> quadratic;
};

/// One entry per equation.
struct MHCertificate {
    std::vector<MHEquationCert> equations;
};

/// T(psi, chi) * D^p (omega^l); (p = 0, l = 0) carries the omega-free remainder.
struct ResolubleTerm {
    Expr multiplier;
    MultiIndex p;
    unsigned power = 0;

    friend bool operator==(const ResolubleTerm&, const ResolubleTerm&) = default;
};

struct ResolubleCertificate {
    std::vector<std::vector<ResolubleTerm>> equations;

    friend bool operator==(const ResolubleCertificate&, const ResolubleCertificate&) = default;
};

} // namespace jcond
