#include "hamnf/analysis.hpp"

#include "hamnf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hamnf {

namespace {

constexpr double kPeriodEpsilon = 0.02 * 2.0 * std::numbers::pi;
constexpr double kPeriodDelta = 0.1;

struct BrouwerChoice {
  std::optional<int> value;
  BrouwerSource source = BrouwerSource::Unknown;
};

BrouwerChoice choose_brouwer(const EquilibriumSpec& e,
                             const std::optional<PolynomialHamiltonian>& h,
                             const TolerancePolicy& tol) {
  if (e.brouwer_index) return {e.brouwer_index, BrouwerSource::UserSupplied};
  try {
    return {brouwer_nondegenerate(e.hessian, tol), BrouwerSource::Nondegenerate};
  } catch (const DegeneracyError&) {
  }
  if (h && h->dim() == 2) {
    const Vector p = e.point;
    const PolynomialHamiltonian poly = *h;
    PlanarField grad = [poly, p](double x, double y) {
      Vector q(2);
      q << x, y;
      const Vector g = poly.gradient(q);
      return std::array<double, 2>{g(0), g(1)};
    };
    for (double r : {1e-1, 3e-2, 1e-2, 3e-3, 1e-3}) {
      try {
        return {brouwer_planar(grad, {p(0), p(1)}, r, 64, tol),
                BrouwerSource::Planar};
      } catch (const RadiusError&) {
      }
    }
  }
  return {};
}

std::optional<double> match_beta(double b, const std::vector<double>& betas,
                                 const TolerancePolicy& tol) {
  for (double s : betas) {
    if (std::abs(s - b) <= 100.0 * tol.eig_zero_tol * std::max(1.0, s)) return s;
  }
  return std::nullopt;
}

BranchSummary summarize(const Branch& br) {
  BranchSummary s;
  s.beta0 = br.beta0;
  s.termination = to_string(br.termination);
  s.message = br.message;
  s.orbit_count = static_cast<int>(br.orbits.size());
  if (!br.orbits.empty()) {
    s.lambda_first = br.orbits.front().lambda;
    s.lambda_last = br.orbits.back().lambda;
  }
  for (const auto& o : br.orbits) {
    s.amplitude_max = std::max(s.amplitude_max, o.amplitude);
    s.residual_max = std::max(s.residual_max, o.residual);
    s.energy_drift_max = std::max(s.energy_drift_max, o.energy_drift);
  }
  s.period_limit_ok = !br.orbits.empty() &&
                      verify_period_limit(br, br.beta0, kPeriodEpsilon, kPeriodDelta);
  return s;
}

void analyze_equilibrium(const ProblemSpec& spec, const EquilibriumSpec& e,
                         const Stages& stages, EquilibriumReport& er,
                         std::vector<Branch>& branches) {
  const TolerancePolicy& tol = spec.analysis.tolerances;
  const AnalysisSettings& set = spec.analysis;
  const SymmetricMatrix& a = e.hessian;

  const SpectrumReport sr = imaginary_spectrum(hamiltonian_matrix(a), tol);
  er.spectrum = sr.imaginary;
  er.has_nonimaginary = sr.has_nonimaginary;
  er.has_zero_eigenvalue = sr.has_zero_eigenvalue;
  std::vector<double> all;
  for (const auto& ev : sr.imaginary) all.push_back(ev.beta);

  const BrouwerChoice bc = choose_brouwer(e, spec.hamiltonian, tol);
  er.brouwer = bc.value;
  er.brouwer_source = bc.source;

  if (stages.assumptions) {
    try {
      er.assumptions = check_classical_assumptions(a, e.split, tol);
    } catch (const Error& ex) {
      er.assumptions_error = ex.what();
    }
  }
  if (all.empty()) return;

  if (stages.index) {
    const double lmax = set.lambda_max.value_or(2.0 / all.back());
    er.lambda_set = lambda_set_from_frequencies(all, lmax, tol);
  }

  std::optional<NonresonanceReport> nr;
  if (stages.index) {
    nr = nonresonance_and_branch_count(a, er.brouwer, tol);
    er.branch_lower_bound = nr->lower_bound;
  }

  std::vector<double> requested;
  if (set.betas) {
    for (double b : *set.betas) {
      if (auto m = match_beta(b, all, tol)) {
        if (std::find(requested.begin(), requested.end(), *m) == requested.end()) {
          requested.push_back(*m);
        }
      } else {
        BetaReport bad;
        bad.beta = b;
        bad.error = "not a frequency of the linearization";
        er.betas.push_back(bad);
      }
    }
  } else {
    requested = all;
  }

  const bool run_branches =
      stages.continuation && set.continuation && spec.hamiltonian.has_value();
  for (double beta : requested) {
    BetaReport br;
    br.beta = beta;
    try {
      br.condition = check_main_condition(a, er.brouwer, beta, tol, bc.source);
      if (stages.index) {
        for (const auto& [b, flag] : nr->flags) {
          if (b == beta) br.nonresonant = flag;
        }
        if (er.brouwer) {
          const double lambda0 = 1.0 / beta;
          const int jm = set.j_max.value_or(default_j_max(a, lambda0, tol));
          br.index = bifurcation_index(a, *er.brouwer, lambda0, jm, tol);
          br.index->equilibrium_id = e.id;
        }
      }
      if (run_branches) {
        const ContinuationConfig& cc = set.continuation_config;
        const PeriodicOrbit seed =
            seed_from_linearization(a, beta, cc.seed_amplitude, e.point, tol);
        Branch b = continue_branch(*spec.hamiltonian, seed, e.point, beta, cc);
        b.equilibrium_id = e.id;
        br.branch = summarize(b);
        branches.push_back(std::move(b));
      }
    } catch (const Error& ex) {
      br.error = ex.what();
    }
    er.betas.push_back(std::move(br));
  }
}

}  // namespace

AnalysisResult run_analysis(const ProblemSpec& spec, const Stages& stages) {
  AnalysisResult res;
  res.report.tolerances = spec.analysis.tolerances;
  res.report.seed = spec.analysis.seed;
  for (const auto& e : spec.equilibria) {
    EquilibriumReport er;
    er.id = e.id;
    er.point.assign(e.point.data(), e.point.data() + e.point.size());
    try {
      analyze_equilibrium(spec, e, stages, er, res.branches);
    } catch (const Error& ex) {
      er.error = ex.what();
    }
    res.report.equilibria.push_back(std::move(er));
  }
  return res;
}

ExitStatus report_status(const AnalysisReport& report) {
  bool numerical = false;
  bool undetermined = false;
  for (const auto& e : report.equilibria) {
    if (!e.error.empty() || !e.assumptions_error.empty()) numerical = true;
    for (const auto& b : e.betas) {
      if (!b.error.empty()) numerical = true;
      if (b.branch && b.branch->orbit_count == 0) numerical = true;
      if (b.condition && !b.condition->condition_holds) undetermined = true;
    }
  }
  if (numerical) return ExitStatus::Numerical;
  if (undetermined) return ExitStatus::Undetermined;
  return ExitStatus::Ok;
}

}  // namespace hamnf
