#include "hamnf/spectral.hpp"

#include "hamnf/errors.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

namespace hamnf {

namespace {

// Initial single-linkage radius relative to |M|. A Jordan block of size m
// perturbed at machine precision spreads its eigenvalues over a circle of
// radius ~ eps^(1/m) |M|, about 0.02 |M| for m = 9.
constexpr double kInitialLinkage = 0.05;
constexpr double kLinkageShrink = 10.0;

std::vector<std::vector<int>> linkage_components(
    const std::vector<std::complex<double>>& z, const std::vector<int>& idx,
    double radius) {
  std::vector<int> parent(idx.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (std::size_t a = 0; a < idx.size(); ++a) {
    for (std::size_t b = a + 1; b < idx.size(); ++b) {
      if (std::abs(z[idx[a]] - z[idx[b]]) <= radius) {
        parent[find(static_cast<int>(a))] = find(static_cast<int>(b));
      }
    }
  }
  std::vector<std::vector<int>> groups;
  std::vector<int> slot(idx.size(), -1);
  for (std::size_t a = 0; a < idx.size(); ++a) {
    const int r = find(static_cast<int>(a));
    if (slot[r] < 0) {
      slot[r] = static_cast<int>(groups.size());
      groups.emplace_back();
    }
    groups[slot[r]].push_back(idx[a]);
  }
  return groups;
}

}  // namespace

std::string to_string(EigenvalueClass c) {
  switch (c) {
    case EigenvalueClass::Simple:
      return "simple";
    case EigenvalueClass::Semisimple:
      return "semisimple";
    case EigenvalueClass::PartiallySemisimple:
      return "partially_semisimple";
    case EigenvalueClass::StrictlyNonsemisimple:
      return "strictly_nonsemisimple";
  }
  return "unknown";
}

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

int numeric_rank(const CMatrix& a, double rank_tol, double reference) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<CMatrix> svd(a);
  const double thr = rank_tol * reference;
  int r = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    if (svd.singularValues()(i) > thr) ++r;
  }
  return r;
}

NestedKernels nested_kernels(const CMatrix& b, int max_steps,
                             const TolerancePolicy& tol) {
  const Eigen::Index n = b.rows();
  NestedKernels out;
  out.dims.push_back(0);
  out.bases.emplace_back(n, 0);
  out.rank_gap = std::numeric_limits<double>::infinity();
  if (n == 0) return out;

  Eigen::JacobiSVD<CMatrix> ref(b);
  const double bnorm = ref.singularValues()(0);
  const double thr = tol.rank_tol * std::max(bnorm, 1e-300);

  CMatrix q(n, 0);
  for (int k = 1; k <= max_steps; ++k) {
    const CMatrix proj = CMatrix::Identity(n, n) - q * q.adjoint();
    Eigen::JacobiSVD<CMatrix> svd(proj * b, Eigen::ComputeFullV);
    const Eigen::VectorXd& s = svd.singularValues();
    int r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      if (s(i) > thr) ++r;
    }
    if (r > 0) {
      out.rank_gap = std::min(out.rank_gap, s(r - 1) / thr);
      if (s(r - 1) < 10.0 * thr) out.conditioning_warning = true;
    }
    if (r < n) {
      const double dropped = s(r);
      if (dropped > 0.0) out.rank_gap = std::min(out.rank_gap, thr / dropped);
      if (dropped > 0.1 * thr) out.conditioning_warning = true;
    }
    q = svd.matrixV().rightCols(n - r);
    const int d = static_cast<int>(n - r);
    if (d == out.dims.back()) break;
    out.dims.push_back(d);
    out.bases.push_back(q);
    if (d == n) break;
  }
  return out;
}

namespace {

std::vector<int> partition_from_dims(const std::vector<int>& dims) {
  // blocks of size >= k: dims[k] - dims[k-1]
  std::vector<int> at_least;
  for (std::size_t k = 1; k < dims.size(); ++k) {
    at_least.push_back(dims[k] - dims[k - 1]);
  }
  std::vector<int> parts;
  for (std::size_t k = 0; k < at_least.size(); ++k) {
    const int next = k + 1 < at_least.size() ? at_least[k + 1] : 0;
    const int exactly = at_least[k] - next;
    for (int c = 0; c < exactly; ++c) parts.push_back(static_cast<int>(k + 1));
  }
  std::sort(parts.rbegin(), parts.rend());
  return parts;
}

CMatrix shifted(const Matrix& m, std::complex<double> c) {
  CMatrix b = m.cast<std::complex<double>>();
  b.diagonal().array() -= c;
  return b;
}

}  // namespace

JordanData jordan_partition(const Matrix& m, double beta,
                            const TolerancePolicy& tol) {
  if (!(beta > 0.0)) throw ArgumentError("beta must be positive");
  half_dimension(m);
  const NestedKernels nk = nested_kernels(
      shifted(m, {0.0, beta}), static_cast<int>(m.rows()), tol);
  if (nk.dims.size() < 2 || nk.dims[1] == 0) {
    throw NotFoundError("i*" + std::to_string(beta) +
                        " is not an eigenvalue within tolerance");
  }
  JordanData out;
  out.kernel_dims = nk.dims;
  out.partition = partition_from_dims(nk.dims);
  out.conditioning_warning = nk.conditioning_warning;
  return out;
}

std::vector<EigenCluster> eigenvalue_clusters(const Matrix& m,
                                              const TolerancePolicy& tol) {
  if (m.rows() != m.cols()) throw DimensionError("matrix must be square");
  const Eigen::Index n = m.rows();
  if (n == 0) return {};
  Eigen::EigenSolver<Matrix> es(m, false);
  if (es.info() != Eigen::Success) throw Error("eigensolver failed");
  std::vector<std::complex<double>> z(es.eigenvalues().data(),
                                      es.eigenvalues().data() + n);
  const double nrm = std::max(spectral_norm(m), 1e-300);
  const double floor_radius = tol.eig_zero_tol * nrm;

  std::vector<EigenCluster> out;
  std::function<void(const std::vector<int>&, double)> split =
      [&](const std::vector<int>& idx, double radius) {
        for (const auto& group : linkage_components(z, idx, radius)) {
          std::complex<double> c{0.0, 0.0};
          for (int i : group) c += z[i];
          c /= static_cast<double>(group.size());
          const int size = static_cast<int>(group.size());
          if (size == 1) {
            out.push_back({c, 1, true});
            continue;
          }
          const NestedKernels nk = nested_kernels(shifted(m, c), size + 1, tol);
          if (nk.dims.back() == size) {
            out.push_back({c, size, true});
          } else if (radius / kLinkageShrink < floor_radius) {
            out.push_back({c, size, false});
          } else {
            split(group, radius / kLinkageShrink);
          }
        }
      };
  std::vector<int> all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), 0);
  split(all, kInitialLinkage * nrm);
  return out;
}

SpectrumReport imaginary_spectrum(const Matrix& m, const TolerancePolicy& tol) {
  if (!is_hamiltonian(m, tol)) {
    throw StructureError("matrix is not Hamiltonian (M^T != J M J)");
  }
  const double nrm = spectral_norm(m);
  const double axis_tol = tol.eig_zero_tol * std::max(nrm, 1e-300);
  SpectrumReport rep;
  for (const EigenCluster& c : eigenvalue_clusters(m, tol)) {
    const bool on_axis = std::abs(c.center.real()) <= axis_tol;
    const bool at_zero = std::abs(c.center) <= axis_tol;
    if (at_zero) {
      rep.has_zero_eigenvalue = true;
      rep.other.push_back(c);
    } else if (!on_axis) {
      rep.has_nonimaginary = true;
      rep.other.push_back(c);
    } else if (c.center.imag() > 0.0) {
      const double beta = c.center.imag();
      const JordanData jd = jordan_partition(m, beta, tol);
      ImaginaryEigenvalue ev;
      ev.beta = beta;
      ev.jordan_partition = jd.partition;
      ev.algebraic_mult =
          std::accumulate(jd.partition.begin(), jd.partition.end(), 0);
      ev.geometric_mult = static_cast<int>(jd.partition.size());
      ev.conditioning_warning = jd.conditioning_warning || !c.validated ||
                                ev.algebraic_mult != c.multiplicity;
      rep.imaginary.push_back(ev);
    }
  }
  std::sort(rep.imaginary.begin(), rep.imaginary.end(),
            [](const auto& a, const auto& b) { return a.beta > b.beta; });
  return rep;
}

EigenvalueClass classify_eigenvalue(const ImaginaryEigenvalue& ev) {
  const auto& p = ev.jordan_partition;
  if (p.empty()) throw ArgumentError("empty Jordan partition");
  const bool has_one = std::find(p.begin(), p.end(), 1) != p.end();
  const bool has_big =
      std::any_of(p.begin(), p.end(), [](int s) { return s > 1; });
  if (!has_big) {
    return p.size() == 1 ? EigenvalueClass::Simple : EigenvalueClass::Semisimple;
  }
  return has_one ? EigenvalueClass::PartiallySemisimple
                 : EigenvalueClass::StrictlyNonsemisimple;
}

}  // namespace hamnf
