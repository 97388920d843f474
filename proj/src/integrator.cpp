#include "hamnf/integrator.hpp"

#include "hamnf/errors.hpp"

#include <algorithm>
#include <cmath>

namespace hamnf {

namespace {

// Dormand-Prince tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

struct State {
  Vector x;
  Matrix phi;
};

}  // namespace

VectorField gradient_field(const PolynomialHamiltonian& h, double lambda) {
  const Matrix j = standard_symplectic(h.dim() / 2);
  return VectorField{
      [h, lambda, j](const Vector& x) -> Vector {
        return lambda * (j * h.gradient(x));
      },
      [h, lambda, j](const Vector& x) -> Matrix {
        return lambda * (j * h.hessian(x));
      }};
}

FlowResult flow(const VectorField& field, const Vector& x0, double t_end,
                const IntegratorConfig& cfg, const FlowObserver& observer) {
  if (!(t_end > 0.0) || !std::isfinite(t_end)) {
    throw ArgumentError("integration time must be positive and finite");
  }
  const bool var = cfg.variational && static_cast<bool>(field.jacobian);
  const Eigen::Index n = x0.size();

  auto rhs = [&](const State& s) {
    State d;
    d.x = field.value(s.x);
    if (var) d.phi = field.jacobian(s.x) * s.phi;
    return d;
  };
  auto combine = [&](const State& s, double h,
                     std::initializer_list<std::pair<double, const State*>> ks) {
    State r = s;
    for (const auto& [c, k] : ks) {
      if (c == 0.0) continue;
      r.x.noalias() += (h * c) * k->x;
      if (var) r.phi.noalias() += (h * c) * k->phi;
    }
    return r;
  };

  State y{x0, var ? Matrix(Matrix::Identity(n, n)) : Matrix()};
  FlowResult res;
  if (observer) observer(0.0, y.x);

  double t = 0.0;
  const double h_min = cfg.min_step * t_end;
  double h = std::min(t_end, 1e-2 * t_end);
  {
    const double fn = field.value(x0).norm();
    if (fn > 0.0) h = std::min(h, 0.01 * (1.0 + x0.norm()) / fn);
  }
  State k1 = rhs(y);
  while (t < t_end) {
    if (res.steps + res.rejected >= cfg.max_steps) {
      throw IntegrationError("step budget exhausted", t);
    }
    bool last = false;
    if (t + h >= t_end) {
      h = t_end - t;
      last = true;
    }
    const State k2 = rhs(combine(y, h, {{a21, &k1}}));
    const State k3 = rhs(combine(y, h, {{a31, &k1}, {a32, &k2}}));
    const State k4 = rhs(combine(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    const State k5 = rhs(
        combine(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    const State k6 = rhs(combine(
        y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
    const State y_new = combine(
        y, h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    const State k7 = rhs(y_new);

    const Vector err = h * (e1 * k1.x + e3 * k3.x + e4 * k4.x + e5 * k5.x +
                            e6 * k6.x + e7 * k7.x);
    double en = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double sc = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y.x(i)),
                                                             std::abs(y_new.x(i)));
      en += (err(i) / sc) * (err(i) / sc);
    }
    en = std::sqrt(en / static_cast<double>(n));
    if (!std::isfinite(en)) en = 1e10;

    if (en <= 1.0) {
      t = last ? t_end : t + h;
      y = y_new;
      k1 = k7;
      ++res.steps;
      res.error_estimate += err.lpNorm<Eigen::Infinity>();
      if (!y.x.allFinite() || y.x.norm() > cfg.domain_bound) {
        throw IntegrationError("trajectory left the domain", t);
      }
      if (observer) observer(t, y.x);
      const double fac = en == 0.0 ? 5.0 : 0.9 * std::pow(en, -0.2);
      h *= std::clamp(fac, 0.2, 5.0);
    } else {
      ++res.rejected;
      h *= std::clamp(0.9 * std::pow(en, -0.2), 0.1, 1.0);
    }
    if (t < t_end && h < h_min) {
      throw IntegrationError("step size underflow", t);
    }
  }
  res.x = y.x;
  if (var) res.monodromy = y.phi;
  return res;
}

}  // namespace hamnf
