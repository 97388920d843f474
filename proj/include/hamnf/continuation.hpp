#pragma once

// Periodic orbits of x' = lambda J H'(x) with the period fixed at 2 pi:
// shooting corrector, linear predictor and pseudo-arclength continuation.

#include "hamnf/integrator.hpp"
#include "hamnf/linalg.hpp"
#include "hamnf/polynomial.hpp"

#include <string>
#include <vector>

namespace hamnf {

struct PeriodicOrbit {
  Vector x0;
  double lambda = 0.0;
  double amplitude = 0.0;     // max_t |x(t) - equilibrium| over the steps
  double residual = 0.0;      // norm of the bordered shooting defect
  double energy_drift = 0.0;  // max_t |H(x(t)) - H(x0)|
  int iterations = 0;
};

enum class OrbitConstraint {
  Amplitude,    // <u, x0 - s> fixed along the guess direction u
  FixedLambda,  // lambda is not an unknown
};

struct CorrectorConfig {
  double tol = 1e-9;
  int max_iters = 25;
  IntegratorConfig integrator;
  OrbitConstraint constraint = OrbitConstraint::Amplitude;
  /// Orbits closer than this to the equilibrium count as collapsed.
  double min_amplitude = 1e-8;

  bool operator==(const CorrectorConfig&) const = default;
};

/// Pseudo-arclength row <tangent, z - base> = ds with z = (x0, lambda).
/// The phase condition is anchored at base.
struct ArclengthConstraint {
  Vector tangent;
  Vector base;
  double ds = 0.0;
};

/// Gauss-Newton on {phi_2pi(x0) - x0 = 0, phase, constraint} with the
/// Jacobian from the variational equations. The phase condition is anchored
/// at the guess. Throws CorrectorFailure with the last residual.
PeriodicOrbit correct_orbit(const PolynomialHamiltonian& h,
                            const PeriodicOrbit& guess,
                            const Vector& equilibrium,
                            const CorrectorConfig& cfg = {});

PeriodicOrbit correct_orbit(const PolynomialHamiltonian& h,
                            const PeriodicOrbit& guess,
                            const Vector& equilibrium,
                            const ArclengthConstraint& arc,
                            const CorrectorConfig& cfg = {});

/// x0 = equilibrium + amplitude * Re(v) / |Re(v)| for an eigenvector v of
/// i beta0 of J A, lambda = 1 / beta0.
PeriodicOrbit seed_from_linearization(const SymmetricMatrix& a, double beta0,
                                      double amplitude,
                                      const Vector& equilibrium = {},
                                      const TolerancePolicy& tol = {});

enum class Termination { StepBudget, DomainBoundary, CorrectorFailure, AmplitudeTarget };
std::string to_string(Termination t);

struct Branch {
  std::vector<PeriodicOrbit> orbits;
  std::string equilibrium_id;
  Vector equilibrium;
  double beta0 = 0.0;
  Termination termination = Termination::CorrectorFailure;
  std::string message;
};

struct ContinuationConfig {
  CorrectorConfig corrector;
  double seed_amplitude = 1e-2;
  double initial_step = 1e-2;
  double min_step = 1e-6;
  double max_step = 5e-2;
  double growth = 1.3;
  int growth_after = 3;
  int max_steps = 400;
  double amplitude_cap = 1.0;
  double lambda_min = 1e-3;
  double lambda_max = 1e3;

  bool operator==(const ContinuationConfig&) const = default;
};

/// Corrects `seed`, then continues in (x0, lambda). A seed that cannot be
/// corrected gives an empty branch with Termination::CorrectorFailure.
Branch continue_branch(const PolynomialHamiltonian& h, const PeriodicOrbit& seed,
                       const Vector& equilibrium, double beta0,
                       const ContinuationConfig& cfg = {});

/// True iff every orbit with amplitude < delta has
/// |2 pi lambda - 2 pi / beta0| < epsilon.
bool verify_period_limit(const Branch& branch, double beta0, double epsilon,
                         double delta);

/// Smallest 2 pi / k (k <= k_max) after which the orbit closes up to
/// 10 * tol; 2 pi if none.
double minimal_period_estimate(const PeriodicOrbit& orbit,
                               const PolynomialHamiltonian& h,
                               const CorrectorConfig& cfg = {}, int k_max = 32);

}  // namespace hamnf
