#include "hamnf/bifurcation.hpp"
#include "hamnf/errors.hpp"
#include "hamnf/normal_forms.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <numbers>

using namespace hamnf;

namespace {

// H = 1/2 (x1^2 + y1^2) + (b/2)(x2^2 + y2^2): frequencies {1, b}.
SymmetricMatrix two_oscillators(double b) {
  return SymmetricMatrix::diagonal({1.0, b, 1.0, b});
}

SymmetricMatrix example_hessian() {
  const NormalForm nf{{{1.0, 5, -1}, {1.0, 3, 1}, {1.0, 2, 1}}, std::nullopt};
  return hessian_of(assemble_normal_form(nf));
}

}  // namespace

TEST_SUITE("bifurcation") {

TEST_CASE("t_matrix") {
  const SymmetricMatrix t = t_matrix(1, 0.5, SymmetricMatrix::identity(2));
  const Vector ev = symmetric_eigenvalues(t);
  CHECK(ev(0) == doctest::Approx(-1.5));
  CHECK(ev(1) == doctest::Approx(-1.5));
  CHECK(ev(2) == doctest::Approx(0.5));
  CHECK(ev(3) == doctest::Approx(0.5));

  const SymmetricMatrix a = random_symmetric(4, 9);
  CHECK(t_matrix(3, 2.4, a).matrix().isApprox(t_matrix(1, 0.8, a).matrix(), 1e-15));
  CHECK(t.matrix() == oracle::t1(0.5, Matrix::Identity(2, 2)));

  const double beta = 1.7;
  const Matrix d = t_matrix(1, 1.0 / beta, beta * SymmetricMatrix::identity(2)).matrix();
  CHECK(std::abs(d.determinant()) < 1e-12);
  CHECK_THROWS_AS(t_matrix(1, 1.0, SymmetricMatrix::identity(3)), DimensionError);
}

TEST_CASE("lambda sets") {
  auto ls = lambda_set(two_oscillators(2.0), 2.5);
  REQUIRE(ls.points.size() == 5);
  const std::vector<double> want{0.5, 1.0, 1.5, 2.0, 2.5};
  for (std::size_t i = 0; i < want.size(); ++i) {
    CHECK(ls.points[i] == doctest::Approx(want[i]));
  }
  ls = lambda_set(SymmetricMatrix::identity(2), 3.0);
  CHECK(ls.points.size() == 3);
  CHECK(ls.contains(2.0));
  CHECK_FALSE(ls.contains(2.5));

  // Spectrum {+-1 +- i}: no imaginary frequencies.
  Matrix m(4, 4);
  m << 1, 1, 0, 0,
       -1, 1, 0, 0,
       0, 0, -1, 1,
       0, 0, -1, -1;
  REQUIRE(is_hamiltonian(m));
  CHECK(lambda_set(hessian_of(m), 5.0).points.empty());
}

TEST_CASE("choose_mu") {
  CHECK(choose_mu(1.0, lambda_set_from_frequencies({1.0}, 2.0)) == doctest::Approx(0.5));
  CHECK(choose_mu(1.0, lambda_set_from_frequencies({1.0, 2.0}, 2.0)) ==
        doctest::Approx(0.25));
  CHECK(choose_mu(1.0, lambda_set_from_frequencies({1.0, 10.0}, 2.0)) ==
        doctest::Approx(0.05));
  // The untruncated grid decides, not the stored points.
  CHECK(choose_mu(1.0, lambda_set_from_frequencies({1.0, 2.0}, 1.0)) ==
        doctest::Approx(0.25));
  CHECK_THROWS_AS(choose_mu(0.7, lambda_set_from_frequencies({1.0}, 2.0)), ArgumentError);
}

TEST_CASE("gamma jumps") {
  CHECK(gamma_jump(SymmetricMatrix::identity(2), 1.0) == 2);
  for (int n : {1, 3, 5, 7}) {
    for (int eps : {-1, 1}) {
      CHECK(gamma_jump(odd_block_hessian(n, 1.0, eps), 1.0) ==
            oracle::gamma_closed_form(n, eps));
    }
  }
  for (int n : {2, 4, 6}) {
    for (int eps : {-1, 1}) {
      CHECK(gamma_jump(even_block_hessian(n, 1.0, eps), 1.0) == 0);
    }
  }
  CHECK_THROWS_AS(gamma_jump(SymmetricMatrix::identity(2), 2.0), ArgumentError);
}

TEST_CASE("gamma_block closed form and the five groups") {
  CHECK(gamma_block({1.0, 5, -1}) == 2);
  CHECK(gamma_block({1.0, 3, 1}) == 2);
  CHECK(gamma_block({1.0, 4, 1}) == 0);
  CHECK(gamma_block({1.0, 4, -1}) == 0);
  // (N+1)/2 odd with eps = +1, -1; (N+1)/2 even with eps = +1, -1; N even.
  const std::vector<int> groups{gamma_block({1.0, 1, 1}), gamma_block({1.0, 1, -1}),
                                gamma_block({1.0, 3, 1}), gamma_block({1.0, 3, -1}),
                                gamma_block({1.0, 2, 1})};
  CHECK(groups == std::vector<int>{-2, 2, 2, -2, 0});
}

TEST_CASE("Brouwer indices") {
  CHECK(brouwer_nondegenerate(SymmetricMatrix::identity(4)) == 1);
  CHECK(brouwer_nondegenerate(SymmetricMatrix::diagonal({1, -1})) == -1);
  CHECK(brouwer_nondegenerate(example_hessian()) == 1);
  CHECK_THROWS_AS(brouwer_nondegenerate(SymmetricMatrix::diagonal({1, 0})), DegeneracyError);

  using P = std::array<double, 2>;
  CHECK(brouwer_planar([](double x, double y) { return P{x, y}; }, {0, 0}, 0.5) == 1);
  CHECK(brouwer_planar([](double x, double y) { return P{x * x - y * y, 2 * x * y}; },
                       {0, 0}, 1.0) == 2);
  CHECK(brouwer_planar([](double x, double y) { return P{x, -y}; }, {0, 0}, 2.0) == -1);
  // Off-center circle that does not enclose the zero.
  CHECK(brouwer_planar([](double x, double y) { return P{x, y}; }, {3, 0}, 1.0) == 0);
  // Zero on the circle.
  CHECK_THROWS_AS(brouwer_planar([](double x, double y) { return P{x - 1, y}; },
                                 {0, 0}, 1.0),
                  RadiusError);
}

TEST_CASE("eta coordinates and the bifurcation index") {
  const SymmetricMatrix id = SymmetricMatrix::identity(2);
  CHECK(eta_coordinate(id, 1, 1.0, 1) == 2);
  CHECK(eta_coordinate(id, 1, 1.0, 2) == 0);
  CHECK(eta_coordinate(id, -1, 1.0, 1) == -2);

  auto bif = bifurcation_index(id, 1, 1.0, 5);
  CHECK(bif.entries == std::map<int, int>{{1, 2}});
  CHECK_FALSE(bif.may_extend);

  bif = bifurcation_index(two_oscillators(2.0), 1, 1.0, 5);
  CHECK(bif.entries.size() == 2);
  CHECK(bif.entries.count(1) == 1);
  CHECK(bif.entries.count(2) == 1);
  // Brute force: eta_j from oracle Morse counts of T_1 at (1 +- mu)/j.
  for (int j = 1; j <= 5; ++j) {
    const double mu = 0.25;
    const Matrix a = two_oscillators(2.0).matrix();
    const int jump = oracle::negative_count(oracle::t1((1 + mu) / j, a)) -
                     oracle::negative_count(oracle::t1((1 - mu) / j, a));
    CHECK(bif.entries.count(j) == (jump != 0 ? 1u : 0u));
    if (jump) CHECK(bif.entries[j] == jump);
  }

  bif = bifurcation_index(two_oscillators(3.0), 1, 1.0, 2);
  CHECK(bif.may_extend);
  CHECK(bifurcation_index(two_oscillators(2.0), 0, 1.0, 5).trivial());
  CHECK(default_j_max(two_oscillators(3.0), 1.0) == 4);
}

TEST_CASE("sum of indices") {
  BifurcationIndex a, b;
  a.entries = {{1, 2}, {2, -2}};
  b.entries = {{1, -2}};
  CHECK(sum_of_indices({a, b}) == std::map<int, int>{{2, -2}});
  b.entries[2] = 2;
  CHECK(sum_of_indices({a, b}).empty());
}

TEST_CASE("main condition by both routes") {
  auto c = check_main_condition(example_hessian(), std::nullopt, 1.0);
  REQUIRE(c.counts);
  CHECK(c.counts->kappa() == -2);
  CHECK(c.gamma == 4);
  CHECK(c.brouwer == 1);
  CHECK(c.brouwer_source == BrouwerSource::Nondegenerate);
  CHECK(c.condition_holds == true);
  CHECK(c.routes_agree == true);

  // Blocks (1, +1) and (1, -1) at the same frequency cancel.
  const NormalForm pair{{{1.0, 1, 1}, {1.0, 1, -1}}, std::nullopt};
  c = check_main_condition(hessian_of(assemble_normal_form(pair)), std::nullopt, 1.0);
  CHECK(c.counts->kappa() == 0);
  CHECK(c.gamma == 0);
  CHECK(c.condition_holds == false);

  // Degenerate Hessian without a user index: undetermined.
  const NormalForm deg{{{1.0, 1, -1}}, Matrix::Zero(2, 2)};
  c = check_main_condition(hessian_of(assemble_normal_form(deg)), std::nullopt, 1.0);
  CHECK(c.gamma == 2);
  CHECK_FALSE(c.brouwer.has_value());
  CHECK_FALSE(c.condition_holds.has_value());
  c = check_main_condition(hessian_of(assemble_normal_form(deg)), 1, 1.0);
  CHECK(c.brouwer_source == BrouwerSource::UserSupplied);
  CHECK(c.condition_holds == true);
  c = check_main_condition(hessian_of(assemble_normal_form(deg)), 0, 1.0);
  CHECK(c.condition_holds == false);
}

TEST_CASE("nonresonance and branch count") {
  auto r = nonresonance_and_branch_count(two_oscillators(2.0));
  REQUIRE(r.flags.size() == 2);
  CHECK(r.flags[0].first == doctest::Approx(2.0));
  CHECK(r.flags[0].second);
  CHECK_FALSE(r.flags[1].second);
  CHECK(r.lower_bound == 1);

  r = nonresonance_and_branch_count(two_oscillators(std::numbers::sqrt2));
  CHECK(r.flags[0].second);
  CHECK(r.flags[1].second);
  CHECK(r.lower_bound == 2);

  r = nonresonance_and_branch_count(SymmetricMatrix::identity(2));
  CHECK(r.flags.size() == 1);
  CHECK(r.lower_bound == 1);
}

TEST_CASE("integer ratios and rational approximation") {
  CHECK(is_integer_ratio(2.0 + 1e-9));
  CHECK_FALSE(is_integer_ratio(std::numbers::sqrt2));
  auto q = rational_approximation(0.75, 64, 1e-9);
  REQUIRE(q);
  CHECK(q->first == 3);
  CHECK(q->second == 4);
  CHECK_FALSE(rational_approximation(std::numbers::pi, 64, 1e-9));
}

}  // TEST_SUITE
