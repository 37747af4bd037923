#pragma once

#include "jcond/certificates.hpp"
#include "jcond/pdemodel.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

namespace jcond {

/// omega-jet monomial -> coefficient in psi/chi jets and x.
using OmegaCollected = std::map<Monomial, Expr>;

struct AnsatzExpansion {
    std::vector<OmegaCollected> equations;
};

/// T(psi + chi * omega) with jet closure, for U_alpha -> psi_alpha + chi_alpha omega.
Expr ansatz_image(const Expr& op, std::size_t unknowns, std::size_t dim);

/// Groups an expression by its omega-jet part.
OmegaCollected collect_omega(const Expr& e);

AnsatzExpansion substitute_ansatz(const PDESystem& sys);

struct OmegaBasisElement {
    MultiIndex p;
    unsigned power = 1;
    std::map<Monomial, Rational> expansion; // D^p (omega^power)
};

struct OmegaBasis {
    std::vector<OmegaBasisElement> elements;
};

/// All D^p(omega^l), order(p) <= max_order, 1 <= l <= max_power, sorted by (l, p).
OmegaBasis omega_basis(std::size_t dim, unsigned max_order, unsigned max_power);

/// Column order of the elimination. Solutions are unique whenever they exist,
/// the order only changes which witness row surfaces first.
enum class EliminationOrder { Forward, Reversed };

struct DecomposeOptions {
    std::optional<unsigned> max_order; // defaults to the equation's derivative order
    std::optional<unsigned> max_power; // defaults to the equation's degree in U
    EliminationOrder order = EliminationOrder::Forward;
};

/// Farkas-style proof of infeasibility: sum_m weight_m * row_m has zero matrix
/// part and nonzero right-hand side.
struct InfeasibilityWitness {
    Monomial monomial; // reported omega-jet monomial with an uncancellable coefficient
    std::vector<std::pair<Monomial, Rational>> combination;
    Expr residual;
};

struct EquationVerdict {
    bool resoluble = false;
    std::vector<ResolubleTerm> certificate;
    std::optional<InfeasibilityWitness> witness;
    unsigned max_order = 0;
    unsigned max_power = 0;
};

struct ClassifyReport {
    std::vector<EquationVerdict> equations;

    bool resoluble() const;
    /// Certificate of a fully resoluble report; throws std::logic_error otherwise.
    ResolubleCertificate certificate() const;
};

/// Decides the resoluble form for one operator by exact elimination over the omega basis.
EquationVerdict decompose_operator(const Expr& op, std::size_t unknowns, std::size_t dim, const DecomposeOptions& opt = {});

ClassifyReport resoluble_decompose(const PDESystem& sys, const DecomposeOptions& opt = {});

/// Certificate identity for one operator.
bool verify_operator_certificate(const Expr& op, std::size_t unknowns, std::size_t dim,
                                 const std::vector<ResolubleTerm>& terms);

bool verify_certificate(const PDESystem& sys, const ResolubleCertificate& cert);

/// Re-checks a witness against a freshly built basis: the combination must
/// annihilate every basis column and leave a nonzero right-hand side.
bool witness_is_valid(const Expr& op, std::size_t unknowns, std::size_t dim, const EquationVerdict& verdict);

// ------------------------------------------------------------------ MH path

/// sum linear L_alpha U_alpha + sum_rho L_rho[ sum U_alpha P U_alpha' ] in Unknown atoms.
Expr expand_mh(const MHEquationCert& cert, std::size_t dim);

bool mh_verify(const PDESystem& sys, const MHCertificate& cert);

/// Certificate for terms already shaped c(x) U_alpha D^q U_alpha' (|q| <= 1) or linear.
std::optional<MHCertificate> mh_detect(const PDESystem& sys);

class DecompositionFailed : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Resoluble certificate from a verified MH certificate.
ResolubleCertificate mh_to_resoluble(const PDESystem& sys, const MHCertificate& cert);

} // namespace jcond
