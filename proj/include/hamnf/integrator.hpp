#pragma once

#include "hamnf/linalg.hpp"
#include "hamnf/polynomial.hpp"

#include <functional>

namespace hamnf {

struct VectorField {
  std::function<Vector(const Vector&)> value;
  std::function<Matrix(const Vector&)> jacobian;  // may be empty
};

/// x -> lambda * J * H'(x), with Jacobian lambda * J * H''(x).
VectorField gradient_field(const PolynomialHamiltonian& h, double lambda);

struct IntegratorConfig {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  double domain_bound = 1e6;  // |x| beyond this aborts the flow
  double min_step = 1e-12;    // relative to the integration time
  long max_steps = 1000000;
  bool variational = true;

  bool operator==(const IntegratorConfig&) const = default;
};

/// Called at t = 0 and after every accepted step.
using FlowObserver = std::function<void(double t, const Vector& x)>;

struct FlowResult {
  Vector x;
  Matrix monodromy;        // empty unless variational
  double error_estimate = 0.0;  // sum of local error norms
  long steps = 0;
  long rejected = 0;
};

/// Dormand-Prince 5(4) with step control on the state; the variational
/// equations ride along when requested. Throws IntegrationError on step
/// underflow, step budget exhaustion or exit from the domain.
FlowResult flow(const VectorField& field, const Vector& x0, double t_end,
                const IntegratorConfig& cfg = {},
                const FlowObserver& observer = {});

}  // namespace hamnf
