#pragma once

// Dense real linear algebra with a symplectic flavour: the standard
// symplectic matrix, structure predicates, and inertia counts under an
// explicit tolerance policy.

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace hamnf {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Thresholds shared by every numerical decision in the library.
///
/// `rank_tol` is relative to the largest singular value, `eig_zero_tol` is
/// relative to the spectral norm of the matrix under test and
/// `residual_tol` bounds structural identities such as M^T = J M J.
struct TolerancePolicy {
  double rank_tol = 1e-10;
  double eig_zero_tol = 1e-9;
  double residual_tol = 1e-9;

  /// Throws ArgumentError unless all fields are strictly positive and finite.
  void validate() const;
  /// Every threshold multiplied by `factor` (the CLI's --tol-scale).
  TolerancePolicy scaled(double factor) const;

  bool operator==(const TolerancePolicy&) const = default;
};

/// A real symmetric matrix. Construction symmetrizes (A + A^T)/2 so that
/// the stored entries are exactly symmetric.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;
  explicit SymmetricMatrix(const Matrix& a);

  static SymmetricMatrix identity(Eigen::Index dim);
  static SymmetricMatrix diagonal(const std::vector<double>& d);

  Eigen::Index dim() const { return a_.rows(); }
  const Matrix& matrix() const { return a_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return a_(i, j); }

  SymmetricMatrix operator-() const { return SymmetricMatrix(Matrix(-a_)); }
  friend SymmetricMatrix operator*(double s, const SymmetricMatrix& a) {
    return SymmetricMatrix(Matrix(s * a.a_));
  }
  /// P^T A P, again symmetric.
  SymmetricMatrix congruence(const Matrix& p) const;

 private:
  Matrix a_;
};

/// [[0, Id_N], [-Id_N, 0]].
Matrix standard_symplectic(int n);

/// Dimension check shared by the even-dimension predicates.
int half_dimension(const Matrix& m);

bool is_hamiltonian(const Matrix& m, const TolerancePolicy& tol = {});
bool is_symplectic(const Matrix& s, const TolerancePolicy& tol = {});

/// J * A: the Hamiltonian matrix generated by the quadratic form of A.
Matrix hamiltonian_matrix(const SymmetricMatrix& a);
/// Recovers the symmetric A with M = J * A (A = -J M).
SymmetricMatrix hessian_of(const Matrix& m);
/// S^{-1} = -J S^T J for symplectic S.
Matrix symplectic_inverse(const Matrix& s);

struct Inertia {
  int negative = 0;
  int zero = 0;
  int positive = 0;
};

/// Eigenvalues in ascending order.
Vector symmetric_eigenvalues(const SymmetricMatrix& a);

/// Counts eigenvalues below, inside and above the zero band
/// (-eig_zero_tol*|A|, eig_zero_tol*|A|). Throws DegeneracyError when an
/// eigenvalue falls inside the band unless `allow_degenerate` is set.
Inertia inertia(const SymmetricMatrix& a, const TolerancePolicy& tol = {},
                bool allow_degenerate = false);

/// Number of negative eigenvalues.
int morse_index(const SymmetricMatrix& a, const TolerancePolicy& tol = {},
                bool allow_degenerate = false);

/// m^-(-A) - m^-(A).
int signature(const SymmetricMatrix& a, const TolerancePolicy& tol = {},
              bool allow_degenerate = false);

Matrix matrix_exponential(const Matrix& m);

/// exp(scale * J * A) for a seeded random symmetric A with entries in
/// [-1, 1]. Deterministic for a given (n, seed, scale).
Matrix random_symplectic(int n, std::uint64_t seed, double scale = 1.0);

/// Random symmetric matrix with entries uniform in [-1, 1].
SymmetricMatrix random_symmetric(int dim, std::uint64_t seed);

}  // namespace hamnf
