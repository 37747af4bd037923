#pragma once

#include "jcond/certificates.hpp"
#include "jcond/distalg.hpp"
#include "jcond/pdemodel.hpp"

#include <map>
#include <vector>

namespace jcond {

/// Binds the ansatz U = U_- + (U_+ - U_-) H to trace symbols: psi -> U_-,
/// chi -> U_+ - U_-. The no-jump variant identifies U_+ with U_-.
struct TraceBinding {
    bool identify_sides = false;

    static TraceBinding jump() { return {false}; }
    static TraceBinding no_jump() { return {true}; }

    Expr minus(std::size_t alpha, std::size_t dim) const;
    Expr plus(std::size_t alpha, std::size_t dim) const;

    /// psi/chi base atoms -> trace expressions (use with JetClosure::Automatic).
    Bindings psi_chi(std::size_t unknowns, std::size_t dim) const;
    /// Unknown base atoms -> one side's traces.
    Bindings side(Side s, std::size_t unknowns, std::size_t dim) const;
};

enum class ConditionStatus { Constraint, SatisfiedByHypothesis };

struct Condition {
    Expr coefficient;
    ConditionStatus status = ConditionStatus::Constraint;

    friend bool operator==(const Condition&, const Condition&) = default;
};

enum class Locus { Everywhere, NearGamma, OnGamma };

/// Dirac-family conditions live on Gamma, Heaviside ones near it.
Locus locus(const DistAtom& atom);

struct EquationConditions {
    std::map<DistAtom, Condition> atoms;

    friend bool operator==(const EquationConditions&, const EquationConditions&) = default;
};

/// Per equation: distributional atom -> coefficient that must vanish near Gamma.
struct JunctionConditionSet {
    std::vector<EquationConditions> equations;

    bool empty() const;
    std::size_t count() const;

    friend bool operator==(const JunctionConditionSet&, const JunctionConditionSet&) = default;
};

/// Conditions from a resoluble certificate: omega -> H with H^l = H, then
/// D^p H expanded into Dirac derivatives. Raw: includes the smooth part T(U_-) - f.
JunctionConditionSet junction_from_resoluble(const PDESystem& sys, const ResolubleCertificate& cert,
                                             const TraceBinding& binding = TraceBinding::jump());

/// Conditions from an MH certificate by the two-sum formula with the 1/2 weight
/// on the first-order homogeneous parts Q of P. Raw, as above.
JunctionConditionSet junction_from_mh(const PDESystem& sys, const MHCertificate& cert,
                                      const TraceBinding& binding = TraceBinding::jump());

/// Removes the smooth part using T(U_-) = f and reduces the H coefficient modulo
/// T(U_+) - T(U_-) = 0; a vanishing remainder is reported as satisfied by hypothesis.
JunctionConditionSet simplify_with_classical(const JunctionConditionSet& conds, const PDESystem& sys,
                                             const TraceBinding& binding = TraceBinding::jump());

/// Applies gamma delta = 0 and gamma D^{l+1} delta = -(l+1) D^l delta to every condition.
JunctionConditionSet restrict_to_gamma(const JunctionConditionSet& conds);

bool conditions_equal(const JunctionConditionSet& a, const JunctionConditionSet& b);

/// sum_q c_q D^q g over generalized expressions.
GenExpr apply_linear_op(const LinearOpSpec& op, const GenExpr& g, std::size_t dim);

enum class JunctionMethod { Resoluble, MH };

/// Full pipeline: raw conditions, then simplify_with_classical and restrict_to_gamma.
JunctionConditionSet derive_junction_conditions(const PDESystem& sys, const ResolubleCertificate& cert,
                                                const TraceBinding& binding = TraceBinding::jump());
JunctionConditionSet derive_junction_conditions(const PDESystem& sys, const MHCertificate& cert,
                                                const TraceBinding& binding = TraceBinding::jump());

} // namespace jcond
