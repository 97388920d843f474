#include "hamnf/bifurcation.hpp"

#include "hamnf/errors.hpp"
#include "hamnf/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace hamnf {

namespace {

// Relative tolerance for deciding that two levels or frequencies coincide.
double match_tol(const TolerancePolicy& tol) { return 100.0 * tol.eig_zero_tol; }

bool close_rel(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

// Off the grid T_j is nonsingular, but beside a Jordan block of size N its
// smallest eigenvalue only grows like mu^N. When the grid-based mu is too
// tight, the jump is re-read at half the distance to the nearest point where
// T_j itself is singular (lambda = j / beta), then with a band just above
// rounding level.
constexpr double kRoundoffBand = 1e-13;

double singular_gap(double lambda0, int j, const std::vector<double>& betas) {
  double gap = lambda0;
  for (double b : betas) {
    const double d = std::abs(j / b - lambda0);
    if (d > 1e-9 * lambda0) gap = std::min(gap, d);
  }
  return 0.5 * gap;
}

int morse_jump(const SymmetricMatrix& a, double lambda0, double mu, int j,
               const std::vector<double>& betas, const TolerancePolicy& tol) {
  TolerancePolicy narrow = tol;
  narrow.eig_zero_tol = std::min(tol.eig_zero_tol, kRoundoffBand);
  const double wide = std::max(mu, singular_gap(lambda0, j, betas));
  const std::pair<double, const TolerancePolicy*> attempts[] = {
      {mu, &tol}, {0.5 * mu, &tol}, {wide, &tol}, {wide, &narrow}};
  for (std::size_t k = 0;; ++k) {
    const auto [m, t] = attempts[k];
    try {
      return morse_index(t_matrix(j, lambda0 + m, a), *t) -
             morse_index(t_matrix(j, lambda0 - m, a), *t);
    } catch (const DegeneracyError&) {
      if (k + 1 == std::size(attempts)) throw;
    }
  }
}

std::optional<double> matching_frequency(const std::vector<double>& betas,
                                         double beta,
                                         const TolerancePolicy& tol) {
  for (double b : betas) {
    if (close_rel(b, beta, match_tol(tol))) return b;
  }
  return std::nullopt;
}

}  // namespace

SymmetricMatrix t_matrix(int j, double lambda, const SymmetricMatrix& a) {
  if (j < 1) throw ArgumentError("t_matrix index j must be >= 1");
  const int n = half_dimension(a.matrix());
  const Matrix jm = standard_symplectic(n);
  const Matrix s = -(lambda / j) * a.matrix();
  Matrix t(4 * n, 4 * n);
  t << s, jm, -jm, s;
  return SymmetricMatrix(t);
}

std::vector<double> LambdaSet::betas() const {
  std::vector<double> out;
  for (const auto& s : sources) out.push_back(s.beta);
  return out;
}

bool LambdaSet::contains(double lambda, double rel_tol) const {
  for (const auto& s : sources) {
    const double t = lambda * s.beta;
    const double m = std::round(t);
    if (m >= 1.0 && std::abs(t - m) <= rel_tol * std::max(1.0, t)) return true;
  }
  return false;
}

std::vector<double> imaginary_frequencies(const SymmetricMatrix& a,
                                          const TolerancePolicy& tol) {
  const SpectrumReport rep = imaginary_spectrum(hamiltonian_matrix(a), tol);
  std::vector<double> out;
  for (const auto& ev : rep.imaginary) out.push_back(ev.beta);
  return out;
}

LambdaSet lambda_set_from_frequencies(std::vector<double> betas,
                                      double lambda_max,
                                      const TolerancePolicy& tol) {
  if (!(lambda_max > 0.0)) throw ArgumentError("lambda_max must be positive");
  std::sort(betas.rbegin(), betas.rend());
  LambdaSet ls;
  ls.lambda_max = lambda_max;
  std::vector<double> pts;
  for (double b : betas) {
    if (!(b > 0.0)) throw ArgumentError("frequencies must be positive");
    LambdaSource src{b, {}};
    for (int m = 1;; ++m) {
      const double p = m / b;
      if (p > lambda_max * (1.0 + match_tol(tol))) break;
      src.multiples.push_back(m);
      pts.push_back(p);
    }
    ls.sources.push_back(std::move(src));
  }
  std::sort(pts.begin(), pts.end());
  for (double p : pts) {
    if (ls.points.empty() || !close_rel(ls.points.back(), p, match_tol(tol))) {
      ls.points.push_back(p);
    }
  }
  return ls;
}

LambdaSet lambda_set(const SymmetricMatrix& a, double lambda_max,
                     const TolerancePolicy& tol) {
  return lambda_set_from_frequencies(imaginary_frequencies(a, tol), lambda_max,
                                     tol);
}

double choose_mu(double lambda0, const LambdaSet& ls,
                 const TolerancePolicy& tol) {
  if (!(lambda0 > 0.0) || !ls.contains(lambda0, match_tol(tol))) {
    throw ArgumentError("lambda0 = " + std::to_string(lambda0) +
                        " is not a candidate level");
  }
  double nearest = std::numeric_limits<double>::infinity();
  for (const auto& s : ls.sources) {
    const double t = lambda0 * s.beta;
    const double m0 = std::round(t);
    std::vector<double> cands;
    if (std::abs(t - m0) <= match_tol(tol) * std::max(1.0, t)) {
      cands = {m0 - 1.0, m0 + 1.0};
    } else {
      cands = {std::floor(t), std::ceil(t)};
    }
    for (double m : cands) {
      if (m < 1.0) continue;
      nearest = std::min(nearest, std::abs(m / s.beta - lambda0));
    }
  }
  return 0.5 * nearest;
}

int gamma_jump(const SymmetricMatrix& a, double beta0, int j,
               const TolerancePolicy& tol) {
  if (!(beta0 > 0.0)) throw ArgumentError("beta0 must be positive");
  const auto betas = imaginary_frequencies(a, tol);
  const auto b = matching_frequency(betas, beta0, tol);
  if (!b) {
    throw ArgumentError("+-i*" + std::to_string(beta0) +
                        " is not in the spectrum of J A");
  }
  const double lambda0 = 1.0 / *b;
  const LambdaSet ls = lambda_set_from_frequencies(betas, 2.0 * lambda0, tol);
  return morse_jump(a, lambda0, choose_mu(lambda0, ls, tol), j, betas, tol);
}

int gamma_block(const BlockSpec& spec) {
  spec.validate();
  if (!spec.is_odd()) return 0;
  const int half = (spec.half_dim + 1) / 2;
  return 2 * (half % 2 == 0 ? 1 : -1) * spec.epsilon;
}

int brouwer_nondegenerate(const SymmetricMatrix& a, const TolerancePolicy& tol) {
  try {
    return morse_index(a, tol) % 2 == 0 ? 1 : -1;
  } catch (const DegeneracyError&) {
    throw DegeneracyError(
        "Hessian is degenerate: use the planar winding number or supply the "
        "Brouwer index");
  }
}

int brouwer_planar(const PlanarField& grad, std::array<double, 2> center,
                   double radius, int samples, const TolerancePolicy& tol) {
  if (!(radius > 0.0)) throw ArgumentError("radius must be positive");
  if (samples < 4) samples = 4;
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  constexpr int kMaxDepth = 30;

  auto angle_at = [&](double t) {
    const auto g = grad(center[0] + radius * std::cos(t),
                        center[1] + radius * std::sin(t));
    const double nrm = std::hypot(g[0], g[1]);
    if (!(nrm > tol.residual_tol)) {
      throw RadiusError("field nearly vanishes on the circle; shrink radius");
    }
    return std::atan2(g[1], g[0]);
  };
  auto wrap = [&](double d) {
    while (d > std::numbers::pi) d -= kTwoPi;
    while (d <= -std::numbers::pi) d += kTwoPi;
    return d;
  };
  // Refines [t0, t1] until every angle increment is below pi/2.
  auto sweep = [&](auto&& self, double t0, double a0, double t1, double a1,
                   int depth) -> double {
    const double d = wrap(a1 - a0);
    if (std::abs(d) < 0.5 * std::numbers::pi) return d;
    if (depth >= kMaxDepth) {
      throw RadiusError("winding number did not resolve; shrink radius");
    }
    const double tm = 0.5 * (t0 + t1);
    const double am = angle_at(tm);
    return self(self, t0, a0, tm, am, depth + 1) +
           self(self, tm, am, t1, a1, depth + 1);
  };

  double total = 0.0;
  double t_prev = 0.0;
  double a_prev = angle_at(0.0);
  const double a_start = a_prev;
  for (int k = 1; k <= samples; ++k) {
    const double t = kTwoPi * k / samples;
    const double a = k == samples ? a_start : angle_at(t);
    total += sweep(sweep, t_prev, a_prev, t, a, 0);
    t_prev = t;
    a_prev = a;
  }
  return static_cast<int>(std::lround(total / kTwoPi));
}

int eta_coordinate(const SymmetricMatrix& a, int brouwer, double lambda0,
                   int j, const TolerancePolicy& tol) {
  if (j < 1) throw ArgumentError("eta index j must be >= 1");
  const auto betas = imaginary_frequencies(a, tol);
  const LambdaSet ls = lambda_set_from_frequencies(betas, 2.0 * lambda0, tol);
  const double mu = choose_mu(lambda0, ls, tol);
  if (brouwer == 0) return 0;
  return brouwer * morse_jump(a, lambda0, mu, j, betas, tol);
}

int default_j_max(const SymmetricMatrix& a, double lambda0,
                  const TolerancePolicy& tol) {
  const auto betas = imaginary_frequencies(a, tol);
  if (betas.empty()) return 1;
  return static_cast<int>(std::ceil(lambda0 * betas.front() - match_tol(tol))) +
         1;
}

BifurcationIndex bifurcation_index(const SymmetricMatrix& a, int brouwer,
                                   double lambda0, int j_max,
                                   const TolerancePolicy& tol) {
  if (j_max < 1) throw ArgumentError("j_max must be >= 1");
  const auto betas = imaginary_frequencies(a, tol);
  const LambdaSet ls = lambda_set_from_frequencies(betas, 2.0 * lambda0, tol);
  const double mu = choose_mu(lambda0, ls, tol);

  BifurcationIndex out;
  out.lambda0 = lambda0;
  out.j_max = j_max;
  for (double b : betas) {
    if (lambda0 * b > j_max * (1.0 + match_tol(tol))) out.may_extend = true;
  }
  if (brouwer == 0) return out;
  for (int j = 1; j <= j_max; ++j) {
    const int eta = brouwer * morse_jump(a, lambda0, mu, j, betas, tol);
    if (eta != 0) out.entries[j] = eta;
  }
  return out;
}

std::map<int, int> sum_of_indices(const std::vector<BifurcationIndex>& points) {
  std::map<int, int> sum;
  for (const auto& p : points) {
    for (const auto& [j, eta] : p.entries) sum[j] += eta;
  }
  std::erase_if(sum, [](const auto& kv) { return kv.second == 0; });
  return sum;
}

std::string to_string(BrouwerSource s) {
  switch (s) {
    case BrouwerSource::Nondegenerate:
      return "nondegenerate";
    case BrouwerSource::UserSupplied:
      return "user";
    case BrouwerSource::Planar:
      return "planar";
    case BrouwerSource::Unknown:
      return "unknown";
  }
  return "unknown";
}

ConditionReport check_main_condition(const SymmetricMatrix& a,
                                     std::optional<int> brouwer, double beta0,
                                     const TolerancePolicy& tol,
                                     BrouwerSource source_if_given) {
  ConditionReport rep;
  rep.beta0 = beta0;
  rep.gamma = gamma_jump(a, beta0, 1, tol);

  try {
    const Decomposition d =
        structural_decomposition(hamiltonian_matrix(a), beta0, tol);
    rep.blocks = d.blocks;
    rep.counts = block_counts(d.blocks, beta0);
    rep.routes_agree = rep.gamma == -2 * rep.counts->kappa();
  } catch (const Error& e) {
    rep.structural_note = e.what();
  }

  if (brouwer) {
    rep.brouwer = *brouwer;
    rep.brouwer_source = source_if_given;
  } else {
    try {
      rep.brouwer = brouwer_nondegenerate(a, tol);
      rep.brouwer_source = BrouwerSource::Nondegenerate;
    } catch (const DegeneracyError&) {
      rep.brouwer_source = BrouwerSource::Unknown;
    }
  }

  if (rep.gamma == 0) {
    rep.condition_holds = false;
  } else if (rep.brouwer) {
    rep.condition_holds = *rep.brouwer != 0;
  }
  return rep;
}

bool is_integer_ratio(double x, const TolerancePolicy& tol) {
  return std::abs(x - std::round(x)) <= 100.0 * tol.eig_zero_tol;
}

std::optional<std::pair<long, long>> rational_approximation(double x,
                                                            long max_den,
                                                            double abs_tol) {
  // Continued-fraction convergents.
  long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double r = x;
  for (int it = 0; it < 64; ++it) {
    const double fl = std::floor(r);
    const long a = static_cast<long>(fl);
    const long p2 = a * p1 + p0;
    const long q2 = a * q1 + q0;
    if (q2 > max_den) break;
    if (std::abs(x - static_cast<double>(p2) / q2) <= abs_tol) {
      return std::make_pair(p2, q2);
    }
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    const double frac = r - fl;
    if (frac < 1e-15) break;
    r = 1.0 / frac;
  }
  return std::nullopt;
}

NonresonanceReport nonresonance_and_branch_count(const SymmetricMatrix& a,
                                                 std::optional<int> brouwer,
                                                 const TolerancePolicy& tol) {
  const auto betas = imaginary_frequencies(a, tol);  // descending
  if (betas.empty()) {
    throw ArgumentError("no purely imaginary eigenvalues");
  }
  NonresonanceReport rep;
  for (std::size_t k = 0; k < betas.size(); ++k) {
    bool ok = true;
    for (std::size_t j = 0; j < k; ++j) {
      if (is_integer_ratio(betas[j] / betas[k], tol)) ok = false;
    }
    rep.flags.emplace_back(betas[k], ok);
    if (!ok) continue;
    const ConditionReport cr = check_main_condition(a, brouwer, betas[k], tol);
    if (cr.condition_holds.value_or(false)) {
      rep.counted_betas.push_back(betas[k]);
      ++rep.lower_bound;
    }
  }
  return rep;
}

}  // namespace hamnf
