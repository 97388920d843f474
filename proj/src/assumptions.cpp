#include "hamnf/bifurcation.hpp"
#include "hamnf/errors.hpp"
#include "hamnf/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace hamnf {

namespace {

struct ClusterInfo {
  std::complex<double> center;
  int multiplicity = 0;
  bool semisimple = true;
};

// Clusters of a general (not necessarily Hamiltonian) matrix, with a
// semisimplicity flag from the first kernel dimension.
std::vector<ClusterInfo> cluster_info(const Matrix& m,
                                      const TolerancePolicy& tol) {
  std::vector<ClusterInfo> out;
  for (const auto& c : eigenvalue_clusters(m, tol)) {
    CMatrix b = m.cast<std::complex<double>>();
    b.diagonal().array() -= c.center;
    const NestedKernels nk = nested_kernels(b, 1, tol);
    const int geom = nk.dims.size() > 1 ? nk.dims[1] : 0;
    out.push_back({c.center, c.multiplicity, geom == c.multiplicity});
  }
  return out;
}

double axis_tol(const Matrix& m, const TolerancePolicy& tol) {
  return tol.eig_zero_tol * std::max(spectral_norm(m), 1e-300);
}

bool all_imaginary_semisimple(const std::vector<ClusterInfo>& cs, double atol) {
  return std::all_of(cs.begin(), cs.end(), [&](const ClusterInfo& c) {
    return std::abs(c.center.real()) <= atol && c.semisimple;
  });
}

std::vector<double> positive_frequencies(const std::vector<ClusterInfo>& cs,
                                         double atol) {
  std::vector<double> out;
  for (const auto& c : cs) {
    if (std::abs(c.center.real()) <= atol && c.center.imag() > atol) {
      out.push_back(c.center.imag());
    }
  }
  std::sort(out.rbegin(), out.rend());
  return out;
}

// Greatest common "divisor" of commensurate frequencies, if they are.
std::optional<double> common_frequency(const std::vector<double>& betas,
                                       int max_den, double rel_tol) {
  if (betas.empty()) return std::nullopt;
  const double ref = betas.front();
  long lcm_den = 1;
  std::vector<std::pair<long, long>> fr;
  for (double b : betas) {
    const auto r = rational_approximation(b / ref, max_den, rel_tol);
    if (!r) return std::nullopt;
    fr.push_back(*r);
    lcm_den = std::lcm(lcm_den, r->second);
  }
  long g = 0;
  for (const auto& [p, q] : fr) g = std::gcd(g, p * (lcm_den / q));
  return ref * static_cast<double>(g) / static_cast<double>(lcm_den);
}

std::string join(const std::vector<std::string>& parts) {
  std::string s;
  for (const auto& p : parts) {
    if (!s.empty()) s += "; ";
    s += p;
  }
  return s;
}

bool nonzero_gamma(const SymmetricMatrix& a, double beta,
                   const TolerancePolicy& tol) {
  return gamma_jump(a, beta, 1, tol) != 0;
}

}  // namespace

AssumptionReport check_classical_assumptions(
    const SymmetricMatrix& a, const std::optional<SymplecticSplit>& split,
    const TolerancePolicy& tol, int denominator_bound) {
  const int n = half_dimension(a.matrix());
  const Matrix m = hamiltonian_matrix(a);
  const double atol = axis_tol(m, tol);
  const auto clusters = cluster_info(m, tol);
  const auto betas = positive_frequencies(clusters, atol);
  const Inertia in = inertia(a, tol, true);
  const bool nondegenerate = in.zero == 0;
  const double int_tol = 100.0 * tol.eig_zero_tol;

  AssumptionReport rep;

  // (A0): a simple +-i beta with lambda_k / (i beta) not an integer.
  {
    std::vector<std::string> notes;
    for (double b : betas) {
      bool ok = true;
      for (const auto& c : clusters) {
        const bool is_plus = std::abs(c.center - std::complex<double>(0, b)) <=
                             int_tol * std::max(1.0, b);
        const bool is_minus = std::abs(c.center + std::complex<double>(0, b)) <=
                              int_tol * std::max(1.0, b);
        int count = c.multiplicity;
        if (is_plus || is_minus) {
          if (c.multiplicity > 1) {
            ok = false;
            notes.push_back("beta=" + std::to_string(b) + " not simple");
            break;
          }
          count -= 1;
        }
        if (count == 0) continue;
        const std::complex<double> ratio =
            c.center / std::complex<double>(0.0, b);
        if (std::abs(ratio.imag()) <= int_tol &&
            std::abs(ratio.real() - std::round(ratio.real())) <= int_tol) {
          ok = false;
          std::ostringstream s;
          s << "beta=" << b << " resonant with eigenvalue " << c.center.real()
            << (c.center.imag() >= 0 ? "+" : "") << c.center.imag() << "i";
          notes.push_back(s.str());
          break;
        }
      }
      if (ok) rep.a0.certified_betas.push_back(b);
    }
    rep.a0.holds = !rep.a0.certified_betas.empty();
    if (betas.empty()) notes.push_back("no purely imaginary eigenvalues");
    rep.a0.diagnostics = join(notes);
  }

  // (A1): positive definite Hessian.
  {
    rep.a1.holds = in.negative == 0 && in.zero == 0;
    if (rep.a1.holds) rep.a1.certified_betas = betas;
    std::ostringstream s;
    s << "inertia (-,0,+) = (" << in.negative << "," << in.zero << ","
      << in.positive << ")";
    rep.a1.diagnostics = s.str();
  }

  // (A2): nondegenerate, nonzero signature, every solution T0-periodic.
  {
    std::vector<std::string> notes;
    const int sig = in.positive - in.negative;
    const bool periodic = all_imaginary_semisimple(clusters, atol);
    const auto g = common_frequency(betas, denominator_bound, int_tol);
    if (!nondegenerate) notes.push_back("Hessian degenerate");
    if (sig == 0) notes.push_back("signature 0");
    if (!periodic) notes.push_back("spectrum not imaginary semisimple");
    if (!g) notes.push_back("frequencies not commensurate");
    rep.a2.holds = nondegenerate && sig != 0 && periodic && g.has_value();
    if (rep.a2.holds) {
      for (double b : betas) {
        if (nonzero_gamma(a, b, tol)) rep.a2.certified_betas.push_back(b);
      }
      std::ostringstream s;
      s << "signature " << sig << ", common period " << 2.0 * M_PI / *g;
      notes.push_back(s.str());
    }
    rep.a2.diagnostics = join(notes);
  }

  if (!split) return rep;

  // (A3)/(A4) on a splitting E1 + E2.
  const Matrix& e1 = split->e1;
  const Matrix& e2 = split->e2;
  if (e1.rows() != 2 * n || e2.rows() != 2 * n ||
      e1.cols() + e2.cols() != 2 * n || e1.cols() % 2 || e2.cols() % 2 ||
      e1.cols() == 0) {
    throw SplittingError("splitting bases have incompatible shapes");
  }
  const Matrix j = standard_symplectic(n);
  Matrix both(2 * n, 2 * n);
  both << e1, e2;
  Eigen::FullPivLU<Matrix> lu(both);
  lu.setThreshold(tol.rank_tol);
  if (lu.rank() != 2 * n) throw SplittingError("E1 + E2 does not span");
  const double scale = 1.0 + both.norm() * both.norm();
  if ((e1.transpose() * j * e2).norm() > tol.residual_tol * scale * 1e3) {
    throw SplittingError("E1 and E2 are not J-orthogonal");
  }
  auto restricted = [&](const Matrix& e, const char* name) {
    const Matrix pinv = e.completeOrthogonalDecomposition().pseudoInverse();
    const Matrix r = pinv * m * e;
    if ((m * e - e * r).norm() >
        1e3 * tol.residual_tol * (1.0 + m.norm()) * (1.0 + e.norm())) {
      throw SplittingError(std::string(name) + " is not invariant");
    }
    Eigen::FullPivLU<Matrix> w(e.transpose() * j * e);
    if (!w.isInvertible()) {
      throw SplittingError(std::string(name) + " is not symplectic");
    }
    return r;
  };
  const Matrix r1 = restricted(e1, "E1");
  const Matrix r2 = restricted(e2, "E2");
  const SymmetricMatrix h1 = a.congruence(e1);
  const auto c1 = cluster_info(r1, tol);
  const auto c2 = cluster_info(r2, tol);
  const double atol1 = axis_tol(r1, tol);

  // Condition (C).
  std::vector<std::string> cnotes;
  bool cond_c = all_imaginary_semisimple(c1, atol1);
  const auto betas1 = positive_frequencies(c1, atol1);
  std::optional<double> g1;
  if (!cond_c) cnotes.push_back("E1 flow not periodic");
  if (cond_c) {
    g1 = betas1.empty() ? std::nullopt
                        : common_frequency(betas1, denominator_bound, int_tol);
    if (!g1) {
      cond_c = false;
      cnotes.push_back("E1 frequencies not commensurate");
    }
  }
  if (cond_c) {
    for (const auto& c : c2) {
      const double ratio = c.center.imag() / *g1;
      if (std::abs(c.center.real()) <= atol1 &&
          std::abs(ratio - std::round(ratio)) <= int_tol) {
        cond_c = false;
        cnotes.push_back("E2 carries T0-periodic solutions");
        break;
      }
    }
  }
  bool disjoint = true;
  for (const auto& p : c1) {
    for (const auto& q : c2) {
      if (std::abs(p.center - q.center) <=
          int_tol * std::max(1.0, std::abs(p.center))) {
        disjoint = false;
      }
    }
  }
  if (!disjoint) cnotes.push_back("spectra of E1 and E2 intersect");

  const Inertia in1 = inertia(h1, tol, true);
  AssumptionCheck a3;
  {
    auto notes = cnotes;
    if (!nondegenerate) notes.push_back("Hessian degenerate");
    const bool pd = in1.negative == 0 && in1.zero == 0;
    if (!pd) notes.push_back("H1 not positive definite");
    a3.holds = nondegenerate && cond_c && pd;
    if (a3.holds && disjoint) a3.certified_betas = betas1;
    a3.diagnostics = join(notes);
  }
  AssumptionCheck a4;
  {
    auto notes = cnotes;
    if (!nondegenerate) notes.push_back("Hessian degenerate");
    const int sig1 = in1.positive - in1.negative;
    if (sig1 == 0 || in1.zero) notes.push_back("signature of H1 is 0");
    a4.holds = nondegenerate && cond_c && sig1 != 0 && in1.zero == 0;
    if (a4.holds && disjoint) {
      for (double b : betas1) {
        if (nonzero_gamma(a, b, tol)) a4.certified_betas.push_back(b);
      }
    }
    a4.diagnostics = join(notes);
  }
  rep.a3 = a3;
  rep.a4 = a4;
  return rep;
}

}  // namespace hamnf
