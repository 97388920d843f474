#pragma once

#include "hamnf/bifurcation.hpp"
#include "hamnf/continuation.hpp"
#include "hamnf/problem.hpp"
#include "hamnf/spectral.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hamnf {

inline constexpr const char* kToolVersion = "0.1.0";

struct BranchSummary {
  double beta0 = 0.0;
  std::string termination;
  std::string message;
  int orbit_count = 0;
  double lambda_first = 0.0;
  double lambda_last = 0.0;
  double amplitude_max = 0.0;
  double residual_max = 0.0;
  double energy_drift_max = 0.0;
  /// verify_period_limit with epsilon = 0.02 * 2 pi and delta = 0.1.
  bool period_limit_ok = false;

  bool operator==(const BranchSummary&) const = default;
};

struct BetaReport {
  double beta = 0.0;
  std::optional<ConditionReport> condition;
  std::optional<BifurcationIndex> index;
  std::optional<bool> nonresonant;
  std::optional<BranchSummary> branch;
  std::string error;  // nonempty when this frequency failed

  bool operator==(const BetaReport&) const = default;
};

struct EquilibriumReport {
  std::string id;
  std::vector<double> point;
  std::string error;  // nonempty when the equilibrium failed as a whole
  std::vector<ImaginaryEigenvalue> spectrum;
  bool has_nonimaginary = false;
  bool has_zero_eigenvalue = false;
  std::optional<LambdaSet> lambda_set;
  std::optional<int> brouwer;
  BrouwerSource brouwer_source = BrouwerSource::Unknown;
  std::vector<BetaReport> betas;
  std::optional<AssumptionReport> assumptions;
  std::string assumptions_error;
  std::optional<int> branch_lower_bound;

  bool operator==(const EquilibriumReport&) const = default;
};

struct AnalysisReport {
  std::string tool_version = kToolVersion;
  TolerancePolicy tolerances;
  std::uint64_t seed = 0;
  std::vector<EquilibriumReport> equilibria;

  bool operator==(const AnalysisReport&) const = default;
};

/// Which stages run_analysis executes.
struct Stages {
  bool index = true;  // Lambda, the bifurcation index and the branch count
  bool assumptions = true;
  bool continuation = true;
};

struct AnalysisResult {
  AnalysisReport report;
  std::vector<Branch> branches;
};

/// Per-equilibrium pipeline. Failures are recorded in the report and never
/// abort the remaining equilibria or frequencies.
AnalysisResult run_analysis(const ProblemSpec& spec, const Stages& stages = {});

enum class ExitStatus { Ok = 0, Parse = 2, Numerical = 3, Undetermined = 4 };

/// Numerical failures dominate undetermined conditions.
ExitStatus report_status(const AnalysisReport& report);

}  // namespace hamnf
