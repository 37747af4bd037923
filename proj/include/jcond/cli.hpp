#pragma once

#include "jcond/classify.hpp"
#include "jcond/junction.hpp"
#include "jcond/numcheck.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace jcond {

inline constexpr const char* kSchema = "jcond/1";

enum ExitCode : int {
    ExitOk = 0,
    ExitInputError = 1,
    ExitNegative = 2, // not resoluble, or check violated
    ExitNoMHCertificate = 3,
    ExitInconclusive = 4,
};

struct CliOptions {
    JunctionMethod method = JunctionMethod::Resoluble;
    bool latex = false;
    std::vector<double> widths{0.1, 0.05, 0.025};
    std::size_t grid = 400;
    std::uint64_t seed = 1;
};

struct CommandResult {
    int exit_code = ExitOk;
    std::string output;      // document for stdout or --out
    std::string diagnostics; // for stderr
};

CommandResult cmd_classify(const std::string& source, const CliOptions& opt = {});
CommandResult cmd_junction(const std::string& source, const CliOptions& opt = {});
CommandResult cmd_check(const std::string& source, const CliOptions& opt = {});

// ---- document pieces; nlohmann::json keeps object keys sorted

nlohmann::json system_json(const PDESystem& sys);
nlohmann::json verdicts_json(const PDESystem& sys, const ClassifyReport& rep);
nlohmann::json certificate_json(const PDESystem& sys, const ResolubleCertificate& cert);
nlohmann::json certificate_json(const PDESystem& sys, const MHCertificate& cert);
nlohmann::json conditions_json(const PDESystem& sys, const JunctionConditionSet& conds);
nlohmann::json report_json(const ResidualReport& rep, std::uint64_t seed);

/// Canonical text of a document: sorted keys, two-space indent, trailing newline.
std::string render_json(const nlohmann::json& doc);

/// Standalone math-mode fragments, one aligned row per condition.
std::string render_latex_conditions(const PDESystem& sys, const JunctionConditionSet& conds);

/// Human-readable residual table.
std::string render_report_table(const ResidualReport& rep);

std::string atom_name(const DistAtom& a); // "one", "heaviside", "delta"
std::string status_name(ConditionStatus s);
std::string locus_name(Locus l); // "everywhere", "near Gamma", "on Gamma"

} // namespace jcond
