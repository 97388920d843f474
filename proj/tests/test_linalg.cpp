#include "hamnf/errors.hpp"
#include "hamnf/linalg.hpp"
#include "hamnf/normal_forms.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace hamnf;

TEST_SUITE("linalg") {

TEST_CASE("standard symplectic matrix") {
  Matrix j1(2, 2);
  j1 << 0, 1, -1, 0;
  CHECK(standard_symplectic(1) == j1);

  const Matrix j2 = standard_symplectic(2);
  CHECK(j2.topRightCorner(2, 2) == Matrix::Identity(2, 2));
  CHECK(j2.bottomLeftCorner(2, 2) == -Matrix::Identity(2, 2));
  CHECK(j2.topLeftCorner(2, 2).isZero(0));

  for (int n = 1; n <= 8; ++n) {
    const Matrix j = standard_symplectic(n);
    CHECK(j * j == -Matrix::Identity(2 * n, 2 * n));
    CHECK(j == oracle::j_matrix(n));
  }
  CHECK_THROWS_AS(standard_symplectic(0), DimensionError);
}

TEST_CASE("symmetric matrix construction") {
  Matrix a(2, 2);
  a << 1, 2, 4, 3;
  const SymmetricMatrix s(a);
  CHECK(s(0, 1) == 3.0);
  CHECK(s(1, 0) == 3.0);
  CHECK_THROWS_AS(SymmetricMatrix(Matrix(2, 3)), DimensionError);
  Matrix bad = Matrix::Identity(2, 2);
  bad(0, 0) = std::nan("");
  CHECK_THROWS_AS(SymmetricMatrix{bad}, ArgumentError);
}

TEST_CASE("tolerance policy") {
  TolerancePolicy t;
  CHECK_NOTHROW(t.validate());
  t.rank_tol = 0.0;
  CHECK_THROWS_AS(t.validate(), ArgumentError);
  const TolerancePolicy s = TolerancePolicy{}.scaled(10.0);
  CHECK(s.eig_zero_tol == doctest::Approx(1e-8));
}

TEST_CASE("is_hamiltonian") {
  const SymmetricMatrix a = SymmetricMatrix::diagonal({1.0, 2.0});
  CHECK(is_hamiltonian(hamiltonian_matrix(a)));
  CHECK_FALSE(is_hamiltonian(Matrix::Identity(2, 2)));
  CHECK(is_hamiltonian(odd_block(3, 1.0, 1)));
  CHECK_THROWS_AS(is_hamiltonian(Matrix::Identity(3, 3)), DimensionError);
}

TEST_CASE("is_symplectic") {
  CHECK(is_symplectic(standard_symplectic(1)));
  CHECK_FALSE(is_symplectic(2.0 * Matrix::Identity(2, 2)));
  std::mt19937_64 rng(3);
  const Matrix a = oracle::random_symmetric(4, rng);
  const Matrix s = oracle::expm_taylor(0.3 * oracle::j_matrix(2) * a);
  CHECK(is_symplectic(s));
  CHECK_FALSE(is_symplectic(Matrix::Zero(4, 4)));
}

TEST_CASE("morse index and signature") {
  CHECK(morse_index(SymmetricMatrix::diagonal({-1, -1, 2})) == 2);
  // T_1 of 0.5 * Id_2 has eigenvalues -0.5 +- 1, each twice.
  CHECK(morse_index(SymmetricMatrix(oracle::t1(0.5, Matrix::Identity(2, 2)))) == 2);
  CHECK(morse_index(SymmetricMatrix(Matrix::Zero(3, 3)), {}, true) == 0);
  CHECK_THROWS_AS(morse_index(SymmetricMatrix(Matrix::Zero(3, 3))), DegeneracyError);
  CHECK(signature(SymmetricMatrix::identity(4)) == 4);
  CHECK(signature(SymmetricMatrix::diagonal({1, -1})) == 0);
  const Inertia in = inertia(SymmetricMatrix::diagonal({1, 0, -2}), {}, true);
  CHECK(in.negative == 1);
  CHECK(in.zero == 1);
  CHECK(in.positive == 1);
}

TEST_CASE("symplectic inverse and Hessian recovery") {
  const Matrix s = random_symplectic(3, 11, 0.5);
  CHECK((symplectic_inverse(s) * s - Matrix::Identity(6, 6)).norm() < 1e-10);
  const SymmetricMatrix a = random_symmetric(6, 5);
  CHECK((hessian_of(hamiltonian_matrix(a)).matrix() - a.matrix()).norm() < 1e-14);
}

TEST_CASE("matrix exponential against the Taylor oracle") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 5; ++t) {
    const Matrix m = oracle::random_matrix(5, 5, rng) * 2.0;
    CHECK((matrix_exponential(m) - oracle::expm_taylor(m)).norm() <
          1e-10 * (1 + oracle::expm_taylor(m).norm()));
  }
}

TEST_CASE("random_symplectic generator") {
  const Matrix s1 = random_symplectic(2, 7, 1.0);
  const Matrix s2 = random_symplectic(2, 7, 1.0);
  CHECK(is_symplectic(s1));
  CHECK(s1 == s2);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    CHECK(std::abs(random_symplectic(3, seed, 1.0).determinant() - 1.0) < 1e-8);
  }
  CHECK_THROWS_AS(random_symplectic(2, 1, 0.0), ArgumentError);
  CHECK_THROWS_AS(random_symplectic(2, 1, 1.5), ArgumentError);
}

}  // TEST_SUITE
