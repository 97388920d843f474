#include "hamnf/continuation.hpp"
#include "hamnf/errors.hpp"
#include "hamnf/integrator.hpp"
#include "hamnf/normal_forms.hpp"
#include "hamnf/polynomial.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <numbers>

using namespace hamnf;

namespace {

constexpr double kPi = std::numbers::pi;

// 1/2 r^2 + 1/4 r^4 in the plane.
PolynomialHamiltonian radial_quartic() {
  return PolynomialHamiltonian(2, {{0.5, {2, 0}},
                                   {0.5, {0, 2}},
                                   {0.25, {4, 0}},
                                   {0.5, {2, 2}},
                                   {0.25, {0, 4}}});
}

Vector vec(std::initializer_list<double> v) {
  Vector x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double d : v) x(i++) = d;
  return x;
}

}  // namespace

TEST_SUITE("polynomial") {

TEST_CASE("quadratic and quartic evaluation") {
  const auto q = PolynomialHamiltonian::quadratic(SymmetricMatrix::identity(2));
  CHECK(q.value(vec({3, 4})) == doctest::Approx(12.5));
  CHECK(q.hessian(vec({0.3, -2})) == Matrix::Identity(2, 2));

  const auto h = radial_quartic();
  const Vector x = vec({0.3, 0.4});
  const double r2 = 0.25;
  CHECK(h.value(x) == doctest::Approx(0.5 * r2 + 0.25 * r2 * r2));
  CHECK((h.gradient(x) - (1 + r2) * x).norm() < 1e-15);
}

TEST_CASE("gradient and Hessian against finite differences") {
  std::mt19937_64 rng(21);
  std::vector<Monomial> terms;
  std::uniform_int_distribution<int> e(0, 3);
  for (int k = 0; k < 12; ++k) {
    Monomial m{oracle::random_matrix(1, 1, rng)(0, 0), {e(rng), e(rng), e(rng), e(rng)}};
    terms.push_back(m);
  }
  const PolynomialHamiltonian h(4, terms);
  for (int t = 0; t < 10; ++t) {
    const Vector x = oracle::random_matrix(4, 1, rng);
    const Vector g = h.gradient(x);
    const Vector fd = oracle::fd_gradient([&](const Vector& y) { return h.value(y); }, x);
    CHECK((g - fd).norm() <= 1e-6 * std::max(1.0, g.norm()));
    const Matrix hs = h.hessian(x);
    const Matrix fdh = oracle::fd_jacobian([&](const Vector& y) { return h.gradient(y); }, x);
    CHECK((hs - fdh).norm() <= 1e-6 * std::max(1.0, hs.norm()));
  }
}

TEST_CASE("validation") {
  CHECK_THROWS_AS(PolynomialHamiltonian(3, {}), DimensionError);
  CHECK_THROWS_AS(PolynomialHamiltonian(2, {{1.0, {1}}}), DimensionError);
  CHECK_THROWS_AS(PolynomialHamiltonian(2, {{1.0, {-1, 0}}}), ArgumentError);
  CHECK_THROWS_AS(PolynomialHamiltonian(2, {{std::nan(""), {1, 0}}}), ArgumentError);
}

}  // TEST_SUITE

TEST_SUITE("integrator") {

TEST_CASE("gradient field") {
  const auto q = PolynomialHamiltonian::quadratic(SymmetricMatrix::identity(2));
  const VectorField f = gradient_field(q, 1.0);
  CHECK((f.value(vec({1, 2})) - vec({2, -1})).norm() == 0.0);

  const VectorField g = gradient_field(radial_quartic(), 1.5);
  for (double r : {0.1, 0.5, 1.3}) {
    CHECK(g.value(vec({r, 0})).norm() == doctest::Approx(1.5 * r * (1 + r * r)));
  }
}

TEST_CASE("flow of linear fields") {
  const auto q = PolynomialHamiltonian::quadratic(SymmetricMatrix::identity(2));
  const FlowResult r = flow(gradient_field(q, 1.0), vec({1, 0}), kPi / 2);
  CHECK((r.x - vec({0, -1})).norm() < 1e-9);
  Matrix rot(2, 2);
  rot << 0, 1, -1, 0;
  CHECK((r.monodromy - rot).norm() < 1e-9);

  std::mt19937_64 rng(5);
  for (int t = 0; t < 3; ++t) {
    const SymmetricMatrix a(oracle::random_symmetric(4, rng));
    const double lambda = 0.7;
    const FlowResult fr = flow(gradient_field(PolynomialHamiltonian::quadratic(a), lambda),
                               vec({0.1, 0.2, -0.1, 0.05}), 2 * kPi);
    const Matrix expected =
        oracle::expm_taylor(2 * kPi * lambda * oracle::j_matrix(2) * a.matrix());
    CHECK((fr.monodromy - expected).norm() < 1e-7 * std::max(1.0, expected.norm()));
  }
}

TEST_CASE("energy conservation of the quartic oscillator") {
  const auto h = radial_quartic();
  const Vector x0 = vec({0.3, 0});
  double drift = 0.0;
  flow(gradient_field(h, 1.0), x0, 2 * kPi, {}, [&](double, const Vector& x) {
    drift = std::max(drift, std::abs(h.value(x) - h.value(x0)));
  });
  CHECK(drift <= 10 * 1e-10);
}

TEST_CASE("integration failures") {
  // H = x^3 y gives x' = x^3, which leaves every bounded set.
  const PolynomialHamiltonian h(2, {{1.0, {3, 1}}});
  IntegratorConfig cfg;
  cfg.domain_bound = 10.0;
  CHECK_THROWS_AS(flow(gradient_field(h, 1.0), vec({1, 0}), 10.0, cfg), IntegrationError);
  try {
    flow(gradient_field(h, 1.0), vec({1, 0}), 10.0, cfg);
  } catch (const IntegrationError& e) {
    CHECK(e.exit_time() > 0.0);
    CHECK(e.exit_time() < 10.0);
  }
}

}  // TEST_SUITE

TEST_SUITE("continuation") {

TEST_CASE("corrector on the radial quartic") {
  const auto h = radial_quartic();
  PeriodicOrbit g;
  g.x0 = vec({0.5, 0});
  g.lambda = 0.8;
  auto o = correct_orbit(h, g, Vector());
  CHECK(o.lambda == doctest::Approx(0.8).epsilon(1e-6));
  CHECK(o.residual <= 1e-9);

  g.x0 = vec({0.1, 0});
  g.lambda = 0.95;
  o = correct_orbit(h, g, Vector());
  CHECK(std::abs(o.lambda - 1 / 1.01) < 1e-6);

  const auto q = PolynomialHamiltonian::quadratic(2.0 * SymmetricMatrix::identity(2));
  g.x0 = vec({0.05, 0});
  g.lambda = 0.4;
  o = correct_orbit(q, g, Vector());
  CHECK(std::abs(o.lambda - 0.5) < 1e-9);
}

TEST_CASE("corrector failure carries the residual") {
  const auto h = radial_quartic();
  PeriodicOrbit g;
  g.x0 = vec({0.5, 0});
  g.lambda = 0.3;
  CorrectorConfig cfg;
  cfg.max_iters = 1;
  try {
    correct_orbit(h, g, Vector(), cfg);
    FAIL("expected a corrector failure");
  } catch (const CorrectorFailure& e) {
    CHECK(e.last_residual() > 1e-9);
  }
}

TEST_CASE("seeding from the linearization") {
  auto s = seed_from_linearization(SymmetricMatrix::identity(2), 1.0, 0.1);
  CHECK(s.lambda == 1.0);
  CHECK(s.x0.norm() == doctest::Approx(0.1));

  const SymmetricMatrix a = odd_block_hessian(3, 1.0, 1);
  s = seed_from_linearization(a, 1.0, 0.2);
  CHECK(s.x0.norm() == doctest::Approx(0.2));
  // The seed direction is the real part of a geometric eigenvector.
  CMatrix b = hamiltonian_matrix(a).cast<std::complex<double>>();
  b.diagonal().array() -= std::complex<double>(0, 1);
  Eigen::JacobiSVD<CMatrix> svd(b, Eigen::ComputeFullV);
  const CVector v = svd.matrixV().col(5);
  const double align = std::abs(v.dot(s.x0.cast<std::complex<double>>())) /
                       (v.norm() * s.x0.norm());
  CHECK(align > 0.5);

  CHECK_THROWS_AS(seed_from_linearization(SymmetricMatrix::identity(2), 1.0, 0.0),
                  ArgumentError);
  CHECK_THROWS_AS(seed_from_linearization(SymmetricMatrix::identity(2), 2.0, 0.1),
                  ArgumentError);
}

TEST_CASE("branch of the radial quartic") {
  const auto h = radial_quartic();
  const auto seed = seed_from_linearization(SymmetricMatrix::identity(2), 1.0, 0.01);
  ContinuationConfig cfg;
  cfg.amplitude_cap = 0.55;
  const Branch b = continue_branch(h, seed, Vector(), 1.0, cfg);
  CHECK(b.termination == Termination::AmplitudeTarget);
  REQUIRE(b.orbits.size() > 5);
  for (const auto& o : b.orbits) {
    CHECK(std::abs(o.lambda - 1 / (1 + o.amplitude * o.amplitude)) < 1e-5);
    CHECK(o.lambda > 0.0);
    CHECK(o.energy_drift <= 1e-8);
  }
  CHECK(b.orbits.front().amplitude < 0.02);
  CHECK(verify_period_limit(b, 1.0, 0.02 * 2 * kPi, 0.1));
  CHECK_FALSE(verify_period_limit(b, 2.0, 0.02 * 2 * kPi, 0.1));
  CHECK(minimal_period_estimate(b.orbits[3], h) == doctest::Approx(2 * kPi));
}

TEST_CASE("linear branch is vertical") {
  const SymmetricMatrix a = 2.0 * SymmetricMatrix::identity(2);
  const auto q = PolynomialHamiltonian::quadratic(a);
  const auto seed = seed_from_linearization(a, 2.0, 0.01);
  ContinuationConfig cfg;
  cfg.amplitude_cap = 0.3;
  const Branch b = continue_branch(q, seed, Vector(), 2.0, cfg);
  REQUIRE(b.orbits.size() > 3);
  for (const auto& o : b.orbits) CHECK(std::abs(o.lambda - 0.5) < 1e-9);
  CHECK(b.orbits.back().amplitude > b.orbits.front().amplitude);
  CHECK(verify_period_limit(b, 2.0, 1e-6, 10.0));
}

TEST_CASE("shifted equilibrium") {
  // H = 1/2 ((x - 1)^2 + y^2): same oscillator around (1, 0).
  const PolynomialHamiltonian h(2, {{0.5, {2, 0}}, {-1.0, {1, 0}}, {0.5, {0, 0}}, {0.5, {0, 2}}});
  const Vector s = vec({1, 0});
  const auto seed = seed_from_linearization(SymmetricMatrix::identity(2), 1.0, 0.05, s);
  ContinuationConfig cfg;
  cfg.amplitude_cap = 0.2;
  const Branch b = continue_branch(h, seed, s, 1.0, cfg);
  REQUIRE_FALSE(b.orbits.empty());
  CHECK(std::abs(b.orbits.back().lambda - 1.0) < 1e-9);
  CHECK(b.orbits.front().amplitude == doctest::Approx(0.05).epsilon(1e-6));
}

TEST_CASE("minimal period of a doubled frequency") {
  // Frequencies 1 and 2 at lambda = 1; an orbit in the beta = 2 plane closes
  // after pi.
  const auto q = PolynomialHamiltonian::quadratic(SymmetricMatrix::diagonal({1, 2, 1, 2}));
  PeriodicOrbit o;
  o.x0 = vec({0, 0.1, 0, 0});
  o.lambda = 1.0;
  o.amplitude = 0.1;
  CHECK(minimal_period_estimate(o, q) == doctest::Approx(kPi));
  o.amplitude = 0.0;
  CHECK_THROWS_AS(minimal_period_estimate(o, q), ArgumentError);
}

TEST_CASE("seeding off the grid collapses") {
  // At a fixed lambda that is not a level, the only 2 pi-periodic solution
  // of a linear system is the equilibrium.
  const auto q = PolynomialHamiltonian::quadratic(SymmetricMatrix::identity(2));
  PeriodicOrbit g;
  g.x0 = vec({0.1, 0});
  CorrectorConfig cfg;
  cfg.constraint = OrbitConstraint::FixedLambda;
  g.lambda = 0.8;
  CHECK_THROWS_AS(correct_orbit(q, g, Vector(), cfg), CorrectorFailure);
  g.lambda = 1.0;
  CHECK(correct_orbit(q, g, Vector(), cfg).amplitude == doctest::Approx(0.1));
}

TEST_CASE("empty branch when the seed fails") {
  const auto h = radial_quartic();
  PeriodicOrbit seed;
  seed.x0 = vec({0.5, 0});
  seed.lambda = 0.05;
  ContinuationConfig cfg;
  cfg.corrector.max_iters = 2;
  const Branch b = continue_branch(h, seed, Vector(), 1.0, cfg);
  CHECK(b.orbits.empty());
  CHECK(b.termination == Termination::CorrectorFailure);
}

}  // TEST_SUITE
