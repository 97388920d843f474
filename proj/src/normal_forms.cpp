#include "hamnf/normal_forms.hpp"

#include "hamnf/errors.hpp"
#include "hamnf/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

namespace hamnf {

void BlockSpec::validate() const {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw ArgumentError("block frequency must be positive");
  }
  if (half_dim < 1) throw ArgumentError("block half dimension must be >= 1");
  if (epsilon != 1 && epsilon != -1) {
    throw ArgumentError("block sign must be +1 or -1");
  }
}

bool canonical_less(const BlockSpec& a, const BlockSpec& b) {
  if (a.beta != b.beta) return a.beta > b.beta;
  if (a.half_dim != b.half_dim) return a.half_dim > b.half_dim;
  return a.epsilon > b.epsilon;
}

void sort_canonical(std::vector<BlockSpec>& blocks) {
  std::sort(blocks.begin(), blocks.end(), canonical_less);
}

int NormalForm::half_dim() const {
  int n = 0;
  for (const auto& b : blocks) n += b.half_dim;
  if (other_part) n += half_dimension(*other_part);
  return n;
}

namespace {

// Accumulates c * v_i * v_j into a Hessian.
void add_monomial(Matrix& h, int i, int j, double c) {
  if (i == j) {
    h(i, i) += 2.0 * c;
  } else {
    h(i, j) += c;
    h(j, i) += c;
  }
}

}  // namespace

SymmetricMatrix odd_block_hessian(int n, double beta, int epsilon,
                                  double coupling) {
  if (n < 1 || n % 2 == 0) {
    throw ParityError("odd block needs odd half dimension, got " +
                      std::to_string(n));
  }
  BlockSpec{beta, n, epsilon}.validate();
  Matrix h = Matrix::Zero(2 * n, 2 * n);
  const auto x = [](int i) { return i - 1; };
  const auto y = [n](int i) { return n + i - 1; };
  const double eb = epsilon * beta;
  for (int i = 1; i <= (n - 1) / 2; ++i) {
    const double c = -eb * ((i + 1) % 2 == 0 ? 1.0 : -1.0);
    add_monomial(h, x(i), x(n + 1 - i), c);
    add_monomial(h, y(i), y(n + 1 - i), c);
  }
  for (int i = 1; i <= n - 1; ++i) add_monomial(h, x(i), y(i + 1), coupling);
  const int mid = (n + 1) / 2;
  const double sign = ((n / 2 + 1) % 2 == 0) ? 1.0 : -1.0;
  add_monomial(h, x(mid), x(mid), 0.5 * eb * sign);
  add_monomial(h, y(mid), y(mid), 0.5 * eb * sign);
  return SymmetricMatrix(h);
}

SymmetricMatrix even_block_hessian(int n, double beta, int epsilon,
                                   double coupling) {
  if (n < 2 || n % 2 != 0) {
    throw ParityError("even block needs even half dimension, got " +
                      std::to_string(n));
  }
  BlockSpec{beta, n, epsilon}.validate();
  Matrix h = Matrix::Zero(2 * n, 2 * n);
  const auto x = [](int i) { return i - 1; };
  const auto y = [n](int i) { return n + i - 1; };
  for (int i = 1; i <= n / 2; ++i) {
    add_monomial(h, x(2 * i - 1), y(2 * i), beta);
    add_monomial(h, x(2 * i), y(2 * i - 1), -beta);
  }
  for (int i = 1; i <= n - 2; ++i) add_monomial(h, x(i), y(i + 2), coupling);
  add_monomial(h, x(n - 1), x(n - 1), -0.5 * epsilon * coupling);
  add_monomial(h, x(n), x(n), -0.5 * epsilon * coupling);
  return SymmetricMatrix(h);
}

Matrix odd_block(int half_dim, double beta, int epsilon) {
  return hamiltonian_matrix(odd_block_hessian(half_dim, beta, epsilon));
}

Matrix even_block(int half_dim, double beta, int epsilon) {
  return hamiltonian_matrix(even_block_hessian(half_dim, beta, epsilon));
}

SymmetricMatrix catalogue_hessian(const BlockSpec& spec) {
  return spec.is_odd()
             ? odd_block_hessian(spec.half_dim, spec.beta, spec.epsilon)
             : even_block_hessian(spec.half_dim, spec.beta, spec.epsilon);
}

Matrix catalogue_block(const BlockSpec& spec) {
  return hamiltonian_matrix(catalogue_hessian(spec));
}

namespace {

std::vector<Matrix> block_matrices(const NormalForm& nf) {
  std::vector<Matrix> mats;
  for (const auto& b : nf.blocks) mats.push_back(catalogue_block(b));
  if (nf.other_part) {
    half_dimension(*nf.other_part);
    if (!is_hamiltonian(*nf.other_part)) {
      throw StructureError("normal form: other_part is not Hamiltonian");
    }
    mats.push_back(*nf.other_part);
  }
  if (mats.empty()) throw DimensionError("normal form has no blocks");
  return mats;
}

}  // namespace

Matrix block_direct_sum(const NormalForm& nf) {
  const auto mats = block_matrices(nf);
  const int dim = 2 * nf.half_dim();
  Matrix out = Matrix::Zero(dim, dim);
  Eigen::Index off = 0;
  for (const auto& m : mats) {
    out.block(off, off, m.rows(), m.cols()) = m;
    off += m.rows();
  }
  return out;
}

Matrix normal_form_permutation(const NormalForm& nf) {
  const auto mats = block_matrices(nf);
  const int n = nf.half_dim();
  Matrix p = Matrix::Zero(2 * n, 2 * n);
  int direct = 0;
  int xoff = 0;
  for (const auto& m : mats) {
    const int nj = static_cast<int>(m.rows() / 2);
    for (int i = 0; i < nj; ++i) {
      p(xoff + i, direct + i) = 1.0;
      p(n + xoff + i, direct + nj + i) = 1.0;
    }
    direct += 2 * nj;
    xoff += nj;
  }
  return p;
}

Matrix assemble_normal_form(const NormalForm& nf) {
  const Matrix p = normal_form_permutation(nf);
  return p * block_direct_sum(nf) * p.transpose();
}

BlockCounts block_counts(const std::vector<BlockSpec>& blocks, double beta,
                         double match_tol) {
  if (!(beta > 0.0)) throw ArgumentError("beta must be positive");
  BlockCounts c;
  for (const auto& b : blocks) {
    if (std::abs(b.beta - beta) > match_tol * std::max(1.0, beta)) continue;
    if (!b.is_odd()) continue;
    const bool odd_half = ((b.half_dim + 1) / 2) % 2 == 1;
    if (odd_half) {
      (b.epsilon > 0 ? c.o_plus : c.o_minus)++;
    } else {
      (b.epsilon > 0 ? c.e_plus : c.e_minus)++;
    }
  }
  return c;
}

BlockCounts block_counts(const NormalForm& nf, double beta, double match_tol) {
  return block_counts(nf.blocks, beta, match_tol);
}

namespace {

// Minimum separation (factor) between the Krein-form eigenvalues that carry
// block signs and those that vanish on the quotient.
constexpr double kSignGap = 100.0;
constexpr int kMaxDecompositionHalfDim = 32;

}  // namespace

Decomposition structural_decomposition(const Matrix& m, double beta,
                                       const TolerancePolicy& tol) {
  const int n = half_dimension(m);
  if (!is_hamiltonian(m, tol)) {
    throw StructureError("structural_decomposition: matrix is not Hamiltonian");
  }
  if (!(beta > 0.0)) throw ArgumentError("beta must be positive");
  if (n > kMaxDecompositionHalfDim) {
    throw DecompositionError("decomposition supported up to dimension " +
                             std::to_string(2 * kMaxDecompositionHalfDim));
  }
  const Eigen::Index dim = 2 * n;

  // B = M - i*beta. With H = -iM and G = iJ, H is G-selfadjoint and
  // (H - beta)^(k-1) = (-i)^(k-1) B^(k-1).
  CMatrix b = m.cast<std::complex<double>>();
  b.diagonal().array() -= std::complex<double>(0.0, beta);
  const NestedKernels nk =
      nested_kernels(b, static_cast<int>(dim), tol);
  if (nk.dims.size() < 2 || nk.dims[1] == 0) {
    throw NotFoundError("i*" + std::to_string(beta) +
                        " is not an eigenvalue within tolerance");
  }
  const CMatrix g = std::complex<double>(0.0, 1.0) *
                    standard_symplectic(n).cast<std::complex<double>>();

  Decomposition out;
  out.kernel_dims = nk.dims;
  out.conditioning_warning = nk.conditioning_warning;
  const int kmax = static_cast<int>(nk.dims.size()) - 1;

  CMatrix power = CMatrix::Identity(dim, dim);  // (H - beta)^(k-1)
  const CMatrix h_shift = std::complex<double>(0.0, -1.0) * b;
  for (int k = 1; k <= kmax; ++k) {
    if (k > 1) power = h_shift * power;
    const int at_least = nk.dims[k] - nk.dims[k - 1];
    const int above = k < kmax ? nk.dims[k + 1] - nk.dims[k] : 0;
    const int exactly = at_least - above;
    if (exactly < 0) {
      throw DecompositionError("inconsistent kernel dimensions");
    }
    if (exactly == 0) continue;

    const CMatrix& v = nk.bases[k];
    CMatrix q = v.adjoint() * g * power * v;
    q = 0.5 * (q + q.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<CMatrix> es(q);
    const Eigen::VectorXd ev = es.eigenvalues();
    std::vector<double> mags(ev.data(), ev.data() + ev.size());
    std::vector<int> order(mags.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int c) {
      return std::abs(mags[a]) > std::abs(mags[c]);
    });
    if (static_cast<int>(order.size()) < exactly) {
      throw DecompositionError("Krein form smaller than block count");
    }
    const double kept = std::abs(mags[order[exactly - 1]]);
    const double dropped = static_cast<int>(order.size()) > exactly
                               ? std::abs(mags[order[exactly]])
                               : 0.0;
    const double gap = dropped > 0.0 ? kept / dropped
                                     : std::numeric_limits<double>::infinity();
    if (!(kept > 0.0) || gap < kSignGap) {
      std::ostringstream msg;
      msg << "sign characteristic for blocks of size " << k
          << " is ill-conditioned (gap " << gap << ", kernel dims";
      for (int d : nk.dims) msg << ' ' << d;
      msg << ')';
      throw DecompositionError(msg.str());
    }
    SignCharacteristic sc{k, 0, 0, gap};
    for (int i = 0; i < exactly; ++i) {
      const int s = mags[order[i]] > 0.0 ? 1 : -1;
      (s > 0 ? sc.positive : sc.negative)++;
      // Krein sign to catalogue sign: odd sizes alternate with (k-1)/2.
      const int flip = (k % 2 == 1 && ((k - 1) / 2) % 2 == 1) ? -1 : 1;
      out.blocks.push_back(BlockSpec{beta, k, s * flip});
    }
    out.signs.push_back(sc);
  }
  sort_canonical(out.blocks);
  return out;
}

}  // namespace hamnf
