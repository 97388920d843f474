#include "hamnf/linalg.hpp"

#include "hamnf/errors.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <random>
#include <string>

namespace hamnf {

void TolerancePolicy::validate() const {
  auto ok = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!ok(rank_tol) || !ok(eig_zero_tol) || !ok(residual_tol)) {
    throw ArgumentError("tolerance policy entries must be positive and finite");
  }
}

TolerancePolicy TolerancePolicy::scaled(double factor) const {
  TolerancePolicy out{rank_tol * factor, eig_zero_tol * factor,
                      residual_tol * factor};
  out.validate();
  return out;
}

SymmetricMatrix::SymmetricMatrix(const Matrix& a) {
  if (a.rows() != a.cols()) {
    throw DimensionError("symmetric matrix must be square, got " +
                         std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()));
  }
  if (!a.allFinite()) throw ArgumentError("matrix has non-finite entries");
  a_ = 0.5 * (a + a.transpose());
}

SymmetricMatrix SymmetricMatrix::identity(Eigen::Index dim) {
  return SymmetricMatrix(Matrix::Identity(dim, dim));
}

SymmetricMatrix SymmetricMatrix::diagonal(const std::vector<double>& d) {
  Matrix a = Matrix::Zero(static_cast<Eigen::Index>(d.size()),
                          static_cast<Eigen::Index>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) {
    a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = d[i];
  }
  return SymmetricMatrix(a);
}

SymmetricMatrix SymmetricMatrix::congruence(const Matrix& p) const {
  return SymmetricMatrix(Matrix(p.transpose() * a_ * p));
}

Matrix standard_symplectic(int n) {
  if (n < 1) throw DimensionError("standard_symplectic needs N >= 1");
  Matrix j = Matrix::Zero(2 * n, 2 * n);
  j.topRightCorner(n, n) = Matrix::Identity(n, n);
  j.bottomLeftCorner(n, n) = -Matrix::Identity(n, n);
  return j;
}

int half_dimension(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("matrix must be square");
  if (m.rows() == 0 || m.rows() % 2 != 0) {
    throw DimensionError("expected even dimension, got " +
                         std::to_string(m.rows()));
  }
  return static_cast<int>(m.rows() / 2);
}

bool is_hamiltonian(const Matrix& m, const TolerancePolicy& tol) {
  const int n = half_dimension(m);
  const Matrix j = standard_symplectic(n);
  const double defect = (m.transpose() - j * m * j).norm();
  return defect <= tol.residual_tol * (1.0 + m.norm());
}

bool is_symplectic(const Matrix& s, const TolerancePolicy& tol) {
  const int n = half_dimension(s);
  if (!s.allFinite()) return false;
  const Matrix j = standard_symplectic(n);
  const double defect = (s.transpose() * j * s - j).norm();
  return defect <= tol.residual_tol * (1.0 + s.squaredNorm());
}

Matrix hamiltonian_matrix(const SymmetricMatrix& a) {
  const int n = half_dimension(a.matrix());
  return standard_symplectic(n) * a.matrix();
}

SymmetricMatrix hessian_of(const Matrix& m) {
  const int n = half_dimension(m);
  return SymmetricMatrix(Matrix(-standard_symplectic(n) * m));
}

Matrix symplectic_inverse(const Matrix& s) {
  const int n = half_dimension(s);
  const Matrix j = standard_symplectic(n);
  return -j * s.transpose() * j;
}

Vector symmetric_eigenvalues(const SymmetricMatrix& a) {
  if (a.dim() == 0) return Vector();
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.matrix(), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw Error("symmetric eigensolver failed to converge");
  }
  return es.eigenvalues();
}

Inertia inertia(const SymmetricMatrix& a, const TolerancePolicy& tol,
                bool allow_degenerate) {
  const Vector ev = symmetric_eigenvalues(a);
  const double scale = ev.size() ? ev.cwiseAbs().maxCoeff() : 0.0;
  const double band = tol.eig_zero_tol * scale;
  Inertia out;
  for (double v : ev) {
    if (v < -band) {
      ++out.negative;
    } else if (v > band) {
      ++out.positive;
    } else {
      ++out.zero;
    }
  }
  if (out.zero > 0 && !allow_degenerate) {
    throw DegeneracyError(std::to_string(out.zero) +
                          " eigenvalue(s) inside the zero band");
  }
  return out;
}

int morse_index(const SymmetricMatrix& a, const TolerancePolicy& tol,
                bool allow_degenerate) {
  return inertia(a, tol, allow_degenerate).negative;
}

int signature(const SymmetricMatrix& a, const TolerancePolicy& tol,
              bool allow_degenerate) {
  const Inertia in = inertia(a, tol, allow_degenerate);
  return in.positive - in.negative;
}

Matrix matrix_exponential(const Matrix& m) { return m.exp(); }

SymmetricMatrix random_symmetric(int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix a(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = i; j < dim; ++j) {
      a(i, j) = u(rng);
      a(j, i) = a(i, j);
    }
  }
  return SymmetricMatrix(a);
}

Matrix random_symplectic(int n, std::uint64_t seed, double scale) {
  if (n < 1) throw DimensionError("random_symplectic needs N >= 1");
  if (!(scale > 0.0 && scale <= 1.0)) {
    throw ArgumentError("random_symplectic scale must lie in (0, 1]");
  }
  const SymmetricMatrix a = random_symmetric(2 * n, seed);
  return matrix_exponential(scale * hamiltonian_matrix(a));
}

}  // namespace hamnf
