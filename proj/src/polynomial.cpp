#include "hamnf/polynomial.hpp"

#include "hamnf/errors.hpp"

#include <cmath>
#include <string>

namespace hamnf {

namespace {

double ipow(double x, int e) {
  double r = 1.0;
  for (int k = 0; k < e; ++k) r *= x;
  return r;
}

}  // namespace

PolynomialHamiltonian::PolynomialHamiltonian(int dim, std::vector<Monomial> terms)
    : dim_(dim), terms_(std::move(terms)) {
  if (dim <= 0 || dim % 2) {
    throw DimensionError("polynomial dimension must be positive and even, got " +
                         std::to_string(dim));
  }
  for (std::size_t k = 0; k < terms_.size(); ++k) {
    const auto& t = terms_[k];
    if (static_cast<int>(t.exponents.size()) != dim) {
      throw DimensionError("term " + std::to_string(k) + " has " +
                           std::to_string(t.exponents.size()) +
                           " exponents, expected " + std::to_string(dim));
    }
    if (!std::isfinite(t.coefficient)) {
      throw ArgumentError("term " + std::to_string(k) +
                          " has a non-finite coefficient");
    }
    for (int e : t.exponents) {
      if (e < 0) {
        throw ArgumentError("term " + std::to_string(k) +
                            " has a negative exponent");
      }
    }
  }
}

PolynomialHamiltonian PolynomialHamiltonian::quadratic(const SymmetricMatrix& a) {
  const int n = static_cast<int>(a.dim());
  std::vector<Monomial> terms;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const double c = i == j ? 0.5 * a(i, i) : a(i, j);
      if (c == 0.0) continue;
      Monomial m{c, std::vector<int>(n, 0)};
      m.exponents[i] += 1;
      m.exponents[j] += 1;
      terms.push_back(std::move(m));
    }
  }
  return PolynomialHamiltonian(n, std::move(terms));
}

double PolynomialHamiltonian::value(const Vector& x) const {
  double h = 0.0;
  for (const auto& t : terms_) {
    double p = t.coefficient;
    for (int i = 0; i < dim_; ++i) p *= ipow(x(i), t.exponents[i]);
    h += p;
  }
  return h;
}

Vector PolynomialHamiltonian::gradient(const Vector& x) const {
  Vector g = Vector::Zero(dim_);
  for (const auto& t : terms_) {
    for (int i = 0; i < dim_; ++i) {
      if (t.exponents[i] == 0) continue;
      double p = t.coefficient * t.exponents[i] * ipow(x(i), t.exponents[i] - 1);
      for (int k = 0; k < dim_ && p != 0.0; ++k) {
        if (k != i) p *= ipow(x(k), t.exponents[k]);
      }
      g(i) += p;
    }
  }
  return g;
}

Matrix PolynomialHamiltonian::hessian(const Vector& x) const {
  Matrix h = Matrix::Zero(dim_, dim_);
  std::vector<int> e(dim_);
  for (const auto& t : terms_) {
    for (int i = 0; i < dim_; ++i) {
      for (int j = i; j < dim_; ++j) {
        e = t.exponents;
        double c = t.coefficient;
        c *= e[i];
        e[i] -= 1;
        if (c == 0.0) continue;
        c *= e[j];
        e[j] -= 1;
        if (c == 0.0) continue;
        for (int k = 0; k < dim_; ++k) c *= ipow(x(k), e[k]);
        h(i, j) += c;
        if (i != j) h(j, i) += c;
      }
    }
  }
  return h;
}

PolynomialHamiltonian PolynomialHamiltonian::operator+(
    const PolynomialHamiltonian& other) const {
  if (other.dim_ != dim_) {
    throw DimensionError("cannot add polynomials of different dimension");
  }
  auto terms = terms_;
  terms.insert(terms.end(), other.terms_.begin(), other.terms_.end());
  return PolynomialHamiltonian(dim_, std::move(terms));
}

}  // namespace hamnf
