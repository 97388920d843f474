#pragma once

#include "hamnf/linalg.hpp"

#include <vector>

namespace hamnf {

struct Monomial {
  double coefficient = 0.0;
  std::vector<int> exponents;  // one per coordinate, x_1..x_N then y_1..y_N

  bool operator==(const Monomial&) const = default;
};

/// H(x) = sum_k c_k prod_i x_i^{e_ki} on R^{2N}. Gradient and Hessian are
/// evaluated from the terms, never by differencing.
class PolynomialHamiltonian {
 public:
  PolynomialHamiltonian() = default;
  /// Throws DimensionError for odd `dim` or exponent vectors of the wrong
  /// length, ArgumentError for negative exponents or non-finite coefficients.
  PolynomialHamiltonian(int dim, std::vector<Monomial> terms);

  /// 1/2 x^T A x.
  static PolynomialHamiltonian quadratic(const SymmetricMatrix& a);

  int dim() const { return dim_; }
  const std::vector<Monomial>& terms() const { return terms_; }

  double value(const Vector& x) const;
  Vector gradient(const Vector& x) const;
  Matrix hessian(const Vector& x) const;

  /// Sum of the two polynomials (same dimension).
  PolynomialHamiltonian operator+(const PolynomialHamiltonian& other) const;
  bool operator==(const PolynomialHamiltonian&) const = default;

 private:
  int dim_ = 0;
  std::vector<Monomial> terms_;
};

}  // namespace hamnf
