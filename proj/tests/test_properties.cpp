#include "hamnf/bifurcation.hpp"
#include "hamnf/errors.hpp"
#include "hamnf/linalg.hpp"
#include "hamnf/normal_forms.hpp"
#include "hamnf/spectral.hpp"
#include "generators.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <numeric>

using namespace hamnf;

namespace {

Matrix random_hamiltonian(int n, std::mt19937_64& rng) {
  return oracle::j_matrix(n) * oracle::random_symmetric(2 * n, rng);
}

int dim_of(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

}  // namespace

TEST_SUITE("properties") {

TEST_CASE("symplectic conjugation keeps matrices Hamiltonian") {
  std::mt19937_64 rng(101);
  for (int t = 0; t < 100; ++t) {
    const int n = dim_of(rng, 1, 6);
    const Matrix m = random_hamiltonian(n, rng);
    const Matrix s = oracle::random_symplectic(n, rng, 0.5);
    REQUIRE(is_symplectic(s));
    CHECK(is_hamiltonian(s * m * s.inverse()));
  }
}

TEST_CASE("Morse indices of A and -A add up to the dimension") {
  std::mt19937_64 rng(102);
  for (int t = 0; t < 100; ++t) {
    const int d = 2 * dim_of(rng, 1, 8);
    const SymmetricMatrix a(oracle::random_symmetric(d, rng));
    CHECK(morse_index(a) + morse_index(-a) == d);
    CHECK(morse_index(a) == oracle::negative_count(a.matrix()));
  }
}

TEST_CASE("signature is a congruence invariant") {
  std::mt19937_64 rng(103);
  for (int t = 0; t < 100; ++t) {
    const int d = dim_of(rng, 1, 10);
    const SymmetricMatrix a(oracle::random_symmetric(d, rng));
    const Matrix p = oracle::random_matrix(d, d, rng) + 2.0 * Matrix::Identity(d, d);
    CHECK(signature(a.congruence(p)) == signature(a));
  }
}

TEST_CASE("spectra of Hamiltonian matrices come in quadruples") {
  std::mt19937_64 rng(104);
  for (int t = 0; t < 100; ++t) {
    const int n = dim_of(rng, 1, 6);
    const Matrix m = random_hamiltonian(n, rng);
    const Eigen::VectorXcd ev = Eigen::EigenSolver<Matrix>(m, false).eigenvalues();
    const double scale = spectral_norm(m);
    const auto present = [&](std::complex<double> z) {
      for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (std::abs(ev(i) - z) <= 1e-6 * scale) return true;
      }
      return false;
    };
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
      CHECK(present(-ev(i)));
      CHECK(present(std::conj(ev(i))));
    }
  }
}

TEST_CASE("multiplicities of all clusters sum to the dimension") {
  std::mt19937_64 rng(105);
  for (int t = 0; t < 50; ++t) {
    const auto c = gen::conjugated_normal_form(rng, 6, {0.6, 1.0, 1.7});
    const auto clusters = eigenvalue_clusters(c.m);
    int total = 0;
    for (const auto& cl : clusters) total += cl.multiplicity;
    CHECK(total == c.m.rows());
  }
}

TEST_CASE("Jordan data is invariant under symplectic conjugation") {
  std::mt19937_64 rng(106);
  for (int t = 0; t < 60; ++t) {
    const auto c = gen::conjugated_normal_form(rng, 8, {0.6, 1.0, 1.7});
    const Matrix m0 = assemble_normal_form({c.blocks, std::nullopt});
    const auto r0 = imaginary_spectrum(m0);
    const auto r1 = imaginary_spectrum(c.m);
    REQUIRE(r0.imaginary.size() == r1.imaginary.size());
    for (std::size_t k = 0; k < r0.imaginary.size(); ++k) {
      CHECK(r1.imaginary[k].beta == doctest::Approx(r0.imaginary[k].beta).epsilon(1e-6));
      CHECK(r1.imaginary[k].jordan_partition == r0.imaginary[k].jordan_partition);
      CHECK(classify_eigenvalue(r1.imaginary[k]) == classify_eigenvalue(r0.imaginary[k]));
      // Each block contributes its half dimension to the multiplicity of i beta.
      int sum = 0;
      for (const auto& b : gen::at_beta(c.blocks, r0.imaginary[k].beta)) sum += 2 * b.half_dim;
      CHECK(sum == 2 * r1.imaginary[k].algebraic_mult);
    }
  }
}

TEST_CASE("decomposition round trip and the cross-route identity") {
  std::mt19937_64 rng(107);
  for (int t = 0; t < 100; ++t) {
    const auto c = gen::conjugated_normal_form(rng, 8, {0.6, 1.0, 1.7});
    for (double beta : gen::distinct_betas(c.blocks)) {
      const auto expected = gen::at_beta(c.blocks, beta);
      const Decomposition d = structural_decomposition(c.m, beta);
      REQUIRE(d.blocks.size() == expected.size());
      for (std::size_t k = 0; k < expected.size(); ++k) {
        CHECK(d.blocks[k].half_dim == expected[k].half_dim);
        CHECK(d.blocks[k].epsilon == expected[k].epsilon);
        CHECK(d.blocks[k].beta == doctest::Approx(beta).epsilon(1e-6));
      }
      const int kappa = block_counts(expected, beta).kappa();
      CHECK(gamma_jump(c.a, beta) == -2 * kappa);
    }
  }
}

TEST_CASE("positive definite Hessians give only (1, -1) blocks") {
  std::mt19937_64 rng(108);
  for (int t = 0; t < 30; ++t) {
    const int d = 2 * dim_of(rng, 1, 5);
    const Matrix b = oracle::random_matrix(d, d, rng);
    const SymmetricMatrix a(Matrix(b * b.transpose() + 0.5 * Matrix::Identity(d, d)));
    const Matrix m = hamiltonian_matrix(a);
    const auto r = imaginary_spectrum(m);
    CHECK_FALSE(r.has_nonimaginary);
    for (const auto& ev : r.imaginary) {
      const Decomposition dec = structural_decomposition(m, ev.beta);
      for (const auto& blk : dec.blocks) {
        CHECK(blk.half_dim == 1);
        CHECK(blk.epsilon == -1);
      }
    }
  }
}

TEST_CASE("jumps are additive over direct sums") {
  std::mt19937_64 rng(109);
  for (int t = 0; t < 40; ++t) {
    const auto blocks = gen::random_blocks(rng, 10, {0.6, 1.0, 1.7});
    const SymmetricMatrix a = hessian_of(assemble_normal_form({blocks, std::nullopt}));
    for (double beta : gen::distinct_betas(blocks)) {
      int sum = 0;
      for (const auto& b : gen::at_beta(blocks, beta)) {
        sum += gamma_block(b);
        CHECK(gamma_block(b) == oracle::gamma_closed_form(b.half_dim, b.epsilon));
      }
      CHECK(gamma_jump(a, beta) == sum);
    }
  }
}

TEST_CASE("T_1 degenerates exactly on the candidate levels") {
  std::mt19937_64 rng(110);
  for (int t = 0; t < 20; ++t) {
    const double b1 = 0.5 + std::uniform_real_distribution<double>(0, 1)(rng);
    const double b2 = b1 * 1.37;
    const SymmetricMatrix a = SymmetricMatrix::diagonal({b1, b2, b1, b2});
    const auto min_abs_eig = [&](double lambda, int j = 1) {
      return symmetric_eigenvalues(t_matrix(j, lambda, a)).cwiseAbs().minCoeff();
    };
    for (int m = 1; m <= 3; ++m) {
      CHECK(min_abs_eig(m / b1, m) < 1e-12);
      CHECK(min_abs_eig(m / b2, m) < 1e-12);
    }
    const LambdaSet ls = lambda_set(a, 3.0 / b1);
    for (std::size_t k = 0; k + 1 < ls.points.size(); ++k) {
      CHECK(min_abs_eig(0.5 * (ls.points[k] + ls.points[k + 1])) > 1e-3);
    }
  }
}

TEST_CASE("Morse indices of T_j are symplectically invariant") {
  std::mt19937_64 rng(111);
  std::uniform_real_distribution<double> lam(0.05, 3.0);
  int trials = 0;
  while (trials < 100) {
    const int n = dim_of(rng, 1, 4);
    const SymmetricMatrix a(oracle::random_symmetric(2 * n, rng));
    const Matrix s = oracle::random_symplectic(n, rng, 0.3);
    const SymmetricMatrix b = a.congruence(s);
    const double lambda = lam(rng);
    try {
      const int ma = morse_index(t_matrix(1, lambda, a));
      CHECK(morse_index(t_matrix(1, lambda, b)) == ma);
      ++trials;
    } catch (const DegeneracyError&) {
      // lambda landed on a level; draw again
    }
  }
}

TEST_CASE("homotopy determinants stay at beta^(2N)") {
  for (double beta : {0.5, 1.0, 2.0}) {
    for (int n = 1; n <= 7; ++n) {
      for (int eps : {1, -1}) {
        for (double tau : {0.0, 0.25, 0.5, 0.75, 1.0}) {
          const SymmetricMatrix h = n % 2 ? odd_block_hessian(n, beta, eps, tau)
                                          : even_block_hessian(n, beta, eps, tau);
          const double det = h.matrix().determinant();
          CHECK(std::abs(det - std::pow(beta, 2 * n)) <= 1e-8 * std::pow(beta, 2 * n));
        }
      }
    }
  }
}

}  // TEST_SUITE
