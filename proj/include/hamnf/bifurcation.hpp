#pragma once

// Candidate levels, Morse-index jumps of the T_j matrices, Brouwer indices
// and the bifurcation index; the main condition is evaluated both from the
// spectral side (Morse jump) and the structural side (block counts).

#include "hamnf/linalg.hpp"
#include "hamnf/normal_forms.hpp"

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hamnf {

/// [[-(lambda/j) A, J], [-J, -(lambda/j) A]].
SymmetricMatrix t_matrix(int j, double lambda, const SymmetricMatrix& a);

struct LambdaSource {
  double beta = 0.0;
  std::vector<int> multiples;  // m with m / beta <= lambda_max

  bool operator==(const LambdaSource&) const = default;
};

/// Candidate bifurcation levels m / beta, truncated at lambda_max.
struct LambdaSet {
  std::vector<double> points;  // strictly increasing
  double lambda_max = 0.0;
  std::vector<LambdaSource> sources;

  std::vector<double> betas() const;
  bool contains(double lambda, double rel_tol = 1e-9) const;
  bool operator==(const LambdaSet&) const = default;
};

/// Frequencies beta > 0 with +-i beta in sigma(J A), descending.
std::vector<double> imaginary_frequencies(const SymmetricMatrix& a,
                                          const TolerancePolicy& tol = {});

LambdaSet lambda_set(const SymmetricMatrix& a, double lambda_max,
                     const TolerancePolicy& tol = {});
LambdaSet lambda_set_from_frequencies(std::vector<double> betas,
                                      double lambda_max,
                                      const TolerancePolicy& tol = {});

/// Half the distance from lambda0 to the nearest other level m / beta,
/// computed on the untruncated grids. Throws ArgumentError if lambda0 is not
/// itself a level.
double choose_mu(double lambda0, const LambdaSet& ls,
                 const TolerancePolicy& tol = {});

/// m^-(T_j(lambda0 + mu)) - m^-(T_j(lambda0 - mu)), lambda0 = 1/beta0.
/// A degenerate evaluation is retried with mu/2, then at half the distance
/// to the nearest singular point of T_j.
int gamma_jump(const SymmetricMatrix& a, double beta0, int j = 1,
               const TolerancePolicy& tol = {});

/// Closed form of the jump contributed by one catalogue block.
int gamma_block(const BlockSpec& spec);

/// sign(det A). Throws DegeneracyError when A is singular within tolerance.
int brouwer_nondegenerate(const SymmetricMatrix& a,
                          const TolerancePolicy& tol = {});

using PlanarField = std::function<std::array<double, 2>(double, double)>;

/// Winding number of a planar field along a circle. Throws RadiusError when
/// the field nearly vanishes on the circle.
int brouwer_planar(const PlanarField& grad, std::array<double, 2> center,
                   double radius, int samples = 64,
                   const TolerancePolicy& tol = {});

int eta_coordinate(const SymmetricMatrix& a, int brouwer, double lambda0,
                   int j, const TolerancePolicy& tol = {});

struct BifurcationIndex {
  std::map<int, int> entries;  // j -> eta_j, nonzero only
  std::string equilibrium_id;
  double lambda0 = 0.0;
  int j_max = 0;
  /// Some level j / lambda0 beyond j_max may still be a frequency.
  bool may_extend = false;

  bool trivial() const { return entries.empty(); }
  bool operator==(const BifurcationIndex&) const = default;
};

/// Default truncation ceil(lambda0 * beta_max) + 1.
int default_j_max(const SymmetricMatrix& a, double lambda0,
                  const TolerancePolicy& tol = {});

BifurcationIndex bifurcation_index(const SymmetricMatrix& a, int brouwer,
                                   double lambda0, int j_max,
                                   const TolerancePolicy& tol = {});

/// Componentwise sum of the indices at the bifurcation points a continuum
/// meets. A bounded continuum avoiding the zero level forces an empty sum.
std::map<int, int> sum_of_indices(const std::vector<BifurcationIndex>& points);

enum class BrouwerSource { Nondegenerate, UserSupplied, Planar, Unknown };
std::string to_string(BrouwerSource s);

struct ConditionReport {
  double beta0 = 0.0;
  std::optional<BlockCounts> counts;   // structural route
  std::vector<BlockSpec> blocks;       // structural route, canonical order
  std::string structural_note;         // why the structural route failed
  int gamma = 0;                       // spectral route
  std::optional<int> brouwer;
  BrouwerSource brouwer_source = BrouwerSource::Unknown;
  std::optional<bool> condition_holds;  // empty: undetermined
  std::optional<bool> routes_agree;     // empty: structural unavailable

  bool operator==(const ConditionReport&) const = default;
};

/// Evaluates the nondegenerate-count condition at beta0 via both routes.
/// `brouwer` overrides the determinant-based index (e.g. user input).
ConditionReport check_main_condition(
    const SymmetricMatrix& a, std::optional<int> brouwer, double beta0,
    const TolerancePolicy& tol = {},
    BrouwerSource source_if_given = BrouwerSource::UserSupplied);

struct AssumptionCheck {
  bool holds = false;
  std::vector<double> certified_betas;
  std::string diagnostics;

  bool operator==(const AssumptionCheck&) const = default;
};

struct AssumptionReport {
  AssumptionCheck a0;  // nonresonance
  AssumptionCheck a1;  // positive definite Hessian
  AssumptionCheck a2;  // nondegenerate, nonzero signature, common period
  std::optional<AssumptionCheck> a3;  // needs a splitting
  std::optional<AssumptionCheck> a4;  // needs a splitting

  bool operator==(const AssumptionReport&) const = default;
};

/// Column bases of a symplectic, flow-invariant splitting E1 + E2.
struct SymplecticSplit {
  Matrix e1;
  Matrix e2;
};

AssumptionReport check_classical_assumptions(
    const SymmetricMatrix& a, const std::optional<SymplecticSplit>& split = {},
    const TolerancePolicy& tol = {}, int denominator_bound = 64);

struct NonresonanceReport {
  /// (beta, nonresonant) pairs, beta descending.
  std::vector<std::pair<double, bool>> flags;
  std::vector<double> counted_betas;
  int lower_bound = 0;

  bool operator==(const NonresonanceReport&) const = default;
};

NonresonanceReport nonresonance_and_branch_count(
    const SymmetricMatrix& a, std::optional<int> brouwer = std::nullopt,
    const TolerancePolicy& tol = {});

/// True if x is within 100 * eig_zero_tol of an integer.
bool is_integer_ratio(double x, const TolerancePolicy& tol = {});

/// Best rational p/q with q <= max_den within `abs_tol` of x, if any.
std::optional<std::pair<long, long>> rational_approximation(double x,
                                                            long max_den,
                                                            double abs_tol);

}  // namespace hamnf
