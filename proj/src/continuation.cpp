#include "hamnf/continuation.hpp"

#include "hamnf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

namespace hamnf {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Shot {
  Vector defect;   // phi(x0) - x0
  Matrix d_x;      // monodromy - I
  Vector d_lambda; // 2 pi f(phi(x0)) with the unscaled field f
  double amplitude = 0.0;
  double energy_drift = 0.0;
};

Shot shoot(const PolynomialHamiltonian& h, const Vector& x0, double lambda,
           const Vector& s, const IntegratorConfig& icfg) {
  const double h0 = h.value(x0);
  Shot out;
  auto obs = [&](double, const Vector& x) {
    out.amplitude = std::max(out.amplitude, (x - s).norm());
    out.energy_drift = std::max(out.energy_drift, std::abs(h.value(x) - h0));
  };
  const FlowResult fr = flow(gradient_field(h, lambda), x0, kTwoPi, icfg, obs);
  const Eigen::Index n = x0.size();
  out.defect = fr.x - x0;
  out.d_x = fr.monodromy - Matrix::Identity(n, n);
  out.d_lambda = kTwoPi * (standard_symplectic(static_cast<int>(n / 2)) *
                           h.gradient(fr.x));
  return out;
}

Vector unit_flow_direction(const PolynomialHamiltonian& h, const Vector& x) {
  const Vector f = standard_symplectic(h.dim() / 2) * h.gradient(x);
  const double nf = f.norm();
  if (!(nf > 0.0) || !std::isfinite(nf)) {
    throw CorrectorFailure("flow vanishes at the phase anchor", 0.0);
  }
  return f / nf;
}

struct ExtraRow {
  Vector coeffs;  // over the unknowns
  double rhs = 0.0;
};

PeriodicOrbit newton(const PolynomialHamiltonian& h, const PeriodicOrbit& guess,
                     const Vector& s, const Vector& anchor,
                     const std::optional<ExtraRow>& extra, bool free_lambda,
                     const CorrectorConfig& cfg) {
  const Eigen::Index n = h.dim();
  if (guess.x0.size() != n || (s.size() != 0 && s.size() != n)) {
    throw DimensionError("orbit state has the wrong dimension");
  }
  if (!guess.x0.allFinite() || !std::isfinite(guess.lambda) ||
      !(guess.lambda > 0.0)) {
    throw ArgumentError("orbit guess must be finite with lambda > 0");
  }
  const Vector eq = s.size() ? s : Vector(Vector::Zero(n));
  const Vector phase = unit_flow_direction(h, anchor);
  const Eigen::Index unknowns = free_lambda ? n + 1 : n;
  const Eigen::Index rows = n + 1 + (extra ? 1 : 0);

  Vector x = guess.x0;
  double lambda = guess.lambda;
  double last = std::numeric_limits<double>::infinity();
  for (int it = 0; it <= cfg.max_iters; ++it) {
    Shot sh;
    try {
      sh = shoot(h, x, lambda, eq, cfg.integrator);
    } catch (const IntegrationError& e) {
      throw CorrectorFailure(std::string("integration failed: ") + e.what(), last);
    }
    Vector r(rows);
    Matrix jac = Matrix::Zero(rows, unknowns);
    r.head(n) = sh.defect;
    jac.topLeftCorner(n, n) = sh.d_x;
    if (free_lambda) jac.block(0, n, n, 1) = sh.d_lambda;
    r(n) = phase.dot(x - anchor);
    jac.block(n, 0, 1, n) = phase.transpose();
    if (extra) {
      Vector z(unknowns);
      z.head(n) = x;
      if (free_lambda) z(n) = lambda;
      r(n + 1) = extra->coeffs.dot(z) - extra->rhs;
      jac.row(n + 1) = extra->coeffs.transpose();
    }
    last = r.norm();
    if (!std::isfinite(last)) {
      throw CorrectorFailure("non-finite residual", last);
    }
    if (last <= cfg.tol) {
      if (sh.amplitude < cfg.min_amplitude) {
        throw CorrectorFailure("corrector collapsed to the equilibrium", last);
      }
      PeriodicOrbit out;
      out.x0 = x;
      out.lambda = lambda;
      out.amplitude = sh.amplitude;
      out.residual = last;
      out.energy_drift = sh.energy_drift;
      out.iterations = it;
      return out;
    }
    if (it == cfg.max_iters) break;
    const Vector step = jac.completeOrthogonalDecomposition().solve(-r);
    x += step.head(n);
    if (free_lambda) lambda += step(n);
    if (!(lambda > 0.0)) {
      throw CorrectorFailure("lambda left the positive half-line", last);
    }
  }
  throw CorrectorFailure("no convergence in " + std::to_string(cfg.max_iters) +
                             " iterations",
                         last);
}

Vector tangent_at(const PolynomialHamiltonian& h, const PeriodicOrbit& orb,
                  const Vector& s, const IntegratorConfig& icfg) {
  const Eigen::Index n = h.dim();
  const Shot sh = shoot(h, orb.x0, orb.lambda, s, icfg);
  Matrix jac(n + 1, n + 1);
  jac.topLeftCorner(n, n) = sh.d_x;
  jac.block(0, n, n, 1) = sh.d_lambda;
  jac.block(n, 0, 1, n) = unit_flow_direction(h, orb.x0).transpose();
  jac(n, n) = 0.0;
  Eigen::JacobiSVD<Matrix> svd(jac, Eigen::ComputeFullV);
  return svd.matrixV().col(n);
}

}  // namespace

PeriodicOrbit correct_orbit(const PolynomialHamiltonian& h,
                            const PeriodicOrbit& guess,
                            const Vector& equilibrium,
                            const CorrectorConfig& cfg) {
  const Eigen::Index n = h.dim();
  const Vector s = equilibrium.size() ? equilibrium : Vector(Vector::Zero(n));
  if (cfg.constraint == OrbitConstraint::FixedLambda) {
    return newton(h, guess, s, guess.x0, std::nullopt, false, cfg);
  }
  const Vector d = guess.x0 - s;
  const double a = d.norm();
  if (!(a > 0.0)) throw ArgumentError("orbit guess sits on the equilibrium");
  ExtraRow row{Vector::Zero(n + 1), 0.0};
  row.coeffs.head(n) = d / a;
  row.rhs = a + row.coeffs.head(n).dot(s);
  return newton(h, guess, s, guess.x0, row, true, cfg);
}

PeriodicOrbit correct_orbit(const PolynomialHamiltonian& h,
                            const PeriodicOrbit& guess,
                            const Vector& equilibrium,
                            const ArclengthConstraint& arc,
                            const CorrectorConfig& cfg) {
  const Eigen::Index n = h.dim();
  if (arc.tangent.size() != n + 1 || arc.base.size() != n + 1) {
    throw DimensionError("arclength data must have 2N + 1 entries");
  }
  ExtraRow row{arc.tangent, arc.tangent.dot(arc.base) + arc.ds};
  const Vector anchor = arc.base.head(n);
  return newton(h, guess, equilibrium, anchor, row, true, cfg);
}

PeriodicOrbit seed_from_linearization(const SymmetricMatrix& a, double beta0,
                                      double amplitude,
                                      const Vector& equilibrium,
                                      const TolerancePolicy& tol) {
  if (!(amplitude > 0.0)) throw ArgumentError("seed amplitude must be positive");
  if (!(beta0 > 0.0)) throw ArgumentError("beta0 must be positive");
  const Eigen::Index n = a.dim();
  const Matrix m = hamiltonian_matrix(a);
  CMatrix b = m.cast<std::complex<double>>();
  b.diagonal().array() -= std::complex<double>(0.0, beta0);
  Eigen::JacobiSVD<CMatrix> svd(b, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double scale = std::max({1.0, sv(0), beta0});
  if (sv(n - 1) > 100.0 * tol.eig_zero_tol * scale) {
    throw ArgumentError("i*beta0 is not an eigenvalue of J*A");
  }
  CVector v = svd.matrixV().col(n - 1);
  Eigen::Index k = 0;
  v.cwiseAbs().maxCoeff(&k);
  v *= std::polar(1.0, -std::arg(v(k)));
  Vector re = v.real();
  PeriodicOrbit out;
  const Vector s = equilibrium.size() ? equilibrium : Vector(Vector::Zero(n));
  if (s.size() != n) throw DimensionError("equilibrium has the wrong dimension");
  out.x0 = s + amplitude * re / re.norm();
  out.lambda = 1.0 / beta0;
  out.amplitude = amplitude;
  return out;
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::StepBudget: return "step_budget";
    case Termination::DomainBoundary: return "domain_boundary";
    case Termination::CorrectorFailure: return "corrector_failure";
    case Termination::AmplitudeTarget: return "amplitude_target";
  }
  return "unknown";
}

Branch continue_branch(const PolynomialHamiltonian& h, const PeriodicOrbit& seed,
                       const Vector& equilibrium, double beta0,
                       const ContinuationConfig& cfg) {
  const Eigen::Index n = h.dim();
  Branch br;
  br.equilibrium = equilibrium.size() ? equilibrium : Vector(Vector::Zero(n));
  br.beta0 = beta0;

  CorrectorConfig ccfg = cfg.corrector;
  ccfg.constraint = OrbitConstraint::Amplitude;
  PeriodicOrbit cur;
  try {
    cur = correct_orbit(h, seed, br.equilibrium, ccfg);
  } catch (const Error& e) {
    br.termination = Termination::CorrectorFailure;
    br.message = std::string("seed: ") + e.what();
    return br;
  }
  auto outside = [&](const PeriodicOrbit& o) {
    return !(o.lambda > cfg.lambda_min && o.lambda < cfg.lambda_max);
  };
  if (outside(cur)) {
    br.termination = Termination::DomainBoundary;
    br.message = "seed lambda outside the window";
    return br;
  }
  br.orbits.push_back(cur);
  if (cur.amplitude >= cfg.amplitude_cap) {
    br.termination = Termination::AmplitudeTarget;
    return br;
  }

  Vector tangent;
  try {
    tangent = tangent_at(h, cur, br.equilibrium, ccfg.integrator);
  } catch (const Error& e) {
    br.termination = Termination::CorrectorFailure;
    br.message = std::string("tangent: ") + e.what();
    return br;
  }
  if (tangent.head(n).dot(cur.x0 - br.equilibrium) < 0.0) tangent = -tangent;

  double ds = cfg.initial_step;
  int streak = 0;
  for (int step = 0; step < cfg.max_steps; ++step) {
    Vector base(n + 1);
    base << cur.x0, cur.lambda;
    const Vector pred = base + ds * tangent;
    PeriodicOrbit guess;
    guess.x0 = pred.head(n);
    guess.lambda = pred(n);

    PeriodicOrbit next;
    Vector next_tangent;
    try {
      if (!(guess.lambda > 0.0)) {
        throw CorrectorFailure("predictor crossed lambda = 0", 0.0);
      }
      next = correct_orbit(h, guess, br.equilibrium,
                           ArclengthConstraint{tangent, base, ds}, ccfg);
      next_tangent = tangent_at(h, next, br.equilibrium, ccfg.integrator);
    } catch (const Error& e) {
      ds *= 0.5;
      streak = 0;
      if (ds < cfg.min_step) {
        br.termination = Termination::CorrectorFailure;
        br.message = e.what();
        return br;
      }
      continue;
    }
    if (outside(next)) {
      br.termination = Termination::DomainBoundary;
      return br;
    }
    if (next_tangent.dot(tangent) < 0.0) next_tangent = -next_tangent;
    br.orbits.push_back(next);
    cur = next;
    tangent = next_tangent;
    if (cur.amplitude >= cfg.amplitude_cap) {
      br.termination = Termination::AmplitudeTarget;
      return br;
    }
    if (++streak >= cfg.growth_after) {
      ds = std::min(ds * cfg.growth, cfg.max_step);
      streak = 0;
    }
  }
  br.termination = Termination::StepBudget;
  return br;
}

bool verify_period_limit(const Branch& branch, double beta0, double epsilon,
                         double delta) {
  return std::all_of(branch.orbits.begin(), branch.orbits.end(),
                     [&](const PeriodicOrbit& o) {
                       return o.amplitude >= delta ||
                              std::abs(kTwoPi * o.lambda - kTwoPi / beta0) <
                                  epsilon;
                     });
}

double minimal_period_estimate(const PeriodicOrbit& orbit,
                               const PolynomialHamiltonian& h,
                               const CorrectorConfig& cfg, int k_max) {
  if (!(orbit.amplitude > 0.0)) {
    throw ArgumentError("orbit has zero amplitude");
  }
  IntegratorConfig icfg = cfg.integrator;
  icfg.variational = false;
  const VectorField f = gradient_field(h, orbit.lambda);
  for (int k = k_max; k >= 2; --k) {
    const double t = kTwoPi / k;
    const FlowResult fr = flow(f, orbit.x0, t, icfg);
    if ((fr.x - orbit.x0).norm() <= 10.0 * cfg.tol) return t;
  }
  return kTwoPi;
}

}  // namespace hamnf
