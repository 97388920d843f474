#pragma once

// Problem specifications: equilibria with Hessians, an optional polynomial
// Hamiltonian and analysis settings. The JSON layout is documented in
// docs/FORMAT.md.

#include "hamnf/bifurcation.hpp"
#include "hamnf/continuation.hpp"
#include "hamnf/linalg.hpp"
#include "hamnf/polynomial.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hamnf {

struct EquilibriumSpec {
  std::string id;
  Vector point;
  SymmetricMatrix hessian;
  std::optional<int> brouwer_index;
  std::optional<SymplecticSplit> split;
};

struct AnalysisSettings {
  std::optional<double> lambda_max;  // default 2 / beta_min per equilibrium
  std::optional<int> j_max;          // default per level
  TolerancePolicy tolerances;
  std::optional<std::vector<double>> betas;  // empty optional: all
  std::uint64_t seed = 0;
  bool continuation = true;
  ContinuationConfig continuation_config;

  bool operator==(const AnalysisSettings&) const = default;
};

struct ProblemSpec {
  int dim = 0;
  std::vector<EquilibriumSpec> equilibria;
  std::optional<PolynomialHamiltonian> hamiltonian;
  AnalysisSettings analysis;
};

/// Parses and validates a JSON problem. Throws ParseError (with a JSON
/// pointer) on schema violations and ConsistencyError when a Hessian is not
/// symmetric or disagrees with the Hamiltonian.
ProblemSpec parse_problem(const std::string& text);

/// Runs the consistency checks of parse_problem on an in-memory spec.
void validate_problem(const ProblemSpec& spec);

/// Canonical JSON text; parse_problem(emit_problem(p)) reproduces p.
std::string emit_problem(const ProblemSpec& spec);

bool operator==(const EquilibriumSpec& a, const EquilibriumSpec& b);
bool operator==(const ProblemSpec& a, const ProblemSpec& b);

}  // namespace hamnf
