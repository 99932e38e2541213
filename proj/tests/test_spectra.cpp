#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>

#include "qbnf/errors.hpp"
#include "qbnf/spectra.hpp"
#include "test_support.hpp"

using namespace qbnf;
using qbnf::testing::random_rational;

namespace {

// Second-order Rayleigh-Schrodinger coefficient (hbar = 1) for
// V = x^2/2 + a x^3 + b x^4, summed over a truncated number basis.
double ho_basis_oracle(double a, double b, int n, int size = 40) {
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(size, size);
  for (int k = 0; k + 1 < size; ++k) x(k, k + 1) = x(k + 1, k) = std::sqrt((k + 1) / 2.0);
  const Eigen::MatrixXd x3 = x * x * x;
  const Eigen::MatrixXd x4 = x3 * x;
  double e2 = b * x4(n, n);
  for (int m = 0; m < size - 4; ++m) {
    if (m == n) continue;
    e2 += a * a * x3(m, n) * x3(m, n) / (n - m);
  }
  return e2;
}

Potential poly_potential(double a, double b) {
  return [a, b](double x) { return 0.5 * x * x + a * x * x * x + b * x * x * x * x; };
}

}  // namespace

TEST_CASE("perturbation oracle agrees with the number-basis sum") {
  CHECK(perturbation_oracle(0, 0, 3) == 0);
  CHECK(perturbation_oracle(1, 0, 0) == doctest::Approx(-11.0 / 8).epsilon(1e-15));
  CHECK(perturbation_oracle(0, 1, 1) == doctest::Approx(15.0 / 4).epsilon(1e-15));
  CHECK(perturbation_oracle_exact(1, 0, 0) == Rational(-11, 8));
  CHECK(perturbation_oracle_exact(0, 1, 1) == Rational(15, 4));
  for (int trial = 0; trial < 10; ++trial) {
    const Rational a = random_rational(), b = random_rational();
    for (int n = 0; n <= 5; ++n) {
      const double brute = ho_basis_oracle(to_double(a), to_double(b), n);
      CHECK(perturbation_oracle(to_double(a), to_double(b), n) == doctest::Approx(brute).epsilon(1e-10));
      CHECK(to_double(perturbation_oracle_exact(a, b, n)) == doctest::Approx(brute).epsilon(1e-10));
    }
  }
}

TEST_CASE("harmonic spectrum") {
  EigensolverConfig cfg;
  cfg.hbar = 0.1;
  cfg.half_width = 4.0;
  cfg.levels = 6;
  const auto s = solve_eigenvalues(poly_potential(0, 0), cfg);
  for (int n = 0; n < cfg.levels; ++n) {
    const double err = std::abs(s.values[n] - 0.1 * (n + 0.5));
    CHECK(err < 1e-8);
    CHECK(err <= std::max(10 * s.error_estimates[n], 1e-12));
  }
}

TEST_CASE("solver configuration guards") {
  EigensolverConfig cfg;
  cfg.hbar = 0.1;
  cfg.half_width = 0.5;
  CHECK_THROWS_AS(solve_eigenvalues(poly_potential(0, 0), cfg), Error);
  cfg.half_width = 4.0;
  cfg.grid_points = 1001;
  CHECK_THROWS_AS(solve_eigenvalues(poly_potential(0, 0), cfg), Error);
  cfg.grid_points = 4000;
  cfg.tolerance = 1e-30;
  CHECK_THROWS_AS(solve_eigenvalues(poly_potential(0, 0), cfg), Error);
}

TEST_CASE("anharmonic ground state matches the oracle to O(hbar^3)") {
  const double hbar = 0.05;
  EigensolverConfig cfg;
  cfg.hbar = hbar;
  cfg.half_width = 2.5;
  cfg.levels = 1;
  const auto s = solve_eigenvalues(poly_potential(0, 0.1), cfg);
  const double predicted = hbar / 2 + hbar * hbar * perturbation_oracle(0, 0.1, 0);
  CHECK(std::abs(s.values[0] - predicted) < 0.1 * hbar * hbar * hbar);
}

TEST_CASE("extrapolated hbar^2 coefficient of the ground state") {
  const double pairs[][2] = {{0.2, 0.0}, {0.0, 0.2}, {0.15, 0.1}, {-0.2, 0.05}};
  for (const auto& ab : pairs) {
    const Potential v = poly_potential(ab[0], ab[1]);
    std::vector<double> hs = {0.004, 0.002, 0.001};
    std::vector<double> q;
    for (double h : hs) {
      EigensolverConfig cfg;
      cfg.hbar = h;
      cfg.levels = 1;
      cfg.half_width = confining_half_width(v, 0.0, 10 * std::sqrt(h));
      q.push_back((solve_eigenvalues(v, cfg).values[0] - h / 2) / (h * h));
    }
    // q(h) = c2 + c3 h + O(h^2): linear extrapolation from the last two.
    const double limit = 2 * q[2] - q[1];
    const double oracle = perturbation_oracle(ab[0], ab[1], 0);
    CHECK(std::abs(limit - oracle) < 0.01 * std::abs(oracle));
  }
}

TEST_CASE("Zoll potential has no classical n-dependence at hbar^2") {
  const Potential v = [](double x) {
    const double r = std::sqrt(1 + 2 * x) - 1;
    return 0.5 * r * r;
  };
  const double hbar = 0.002;
  EigensolverConfig cfg;
  cfg.hbar = hbar;
  cfg.levels = 4;
  cfg.half_width = 0.45;
  const auto s = solve_eigenvalues(v, cfg);
  for (int n = 0; n < 4; ++n) {
    const double q = (s.values[n] - hbar * (n + 0.5)) / (hbar * hbar);
    CHECK(std::abs(q - 0.125) < 0.02);
  }
}

TEST_CASE("predict_eigenvalues") {
  FunctionalNormalForm empty;
  const auto e = predict_eigenvalues(empty, 0.25, 0.1, 3);
  for (int n = 0; n < 3; ++n) CHECK(e[n] == doctest::Approx(0.25 + 0.1 * (n + 0.5)).epsilon(1e-15));

  NormalFormSeries nf;
  const Rational A = random_rational(), B = random_rational();
  nf.set(0, 2, A);
  nf.set(1, 0, B);
  const auto p = predict_eigenvalues(weyl_to_functional(nf), 0, 0.01, 4);
  for (int n = 0; n < 4; ++n) {
    const double nu = 0.01 * (n + 0.5);
    CHECK(p[n] == doctest::Approx(nu + to_double(A) * nu * nu + to_double(A / 4 + B) * 1e-4).epsilon(1e-13));
  }
  FunctionalNormalForm minus;
  minus.sign = Sign::Minus;
  CHECK_THROWS_AS(predict_eigenvalues(minus, 0, 0.1, 2), Error);
}

TEST_CASE("functional prediction agrees with perturbation theory at hbar^2") {
  for (int trial = 0; trial < 10; ++trial) {
    PotentialJet jet;
    const Rational a = random_rational(), b = random_rational();
    jet.coeffs = {a, b};
    const auto fnf = weyl_to_functional(forward(jet, 4));
    for (int n = 0; n <= 5; ++n) CHECK(predicted_hbar2_coefficient(fnf, n) == perturbation_oracle_exact(a, b, n));
  }
  PotentialJet quartic;
  const Rational b = random_rational();
  quartic.coeffs = {0, b};
  const auto fnf = weyl_to_functional(forward(quartic, 4));
  for (int n = 0; n <= 5; ++n) {
    CHECK(predicted_hbar2_coefficient(fnf, n) == Rational(3, 4) * b * (2 * n * n + 2 * n + 1));
  }
}

TEST_CASE("convergence studies") {
  SUBCASE("harmonic jet sits at the solver floor") {
    const auto r = convergence_study(PotentialJet{}, {0.08, 0.04, 0.02, 0.01}, 4);
    for (const auto& row : r.rows) CHECK(row.residual < 1e-10);
    CHECK(r.passed);
  }
  SUBCASE("cubic jet at degree 4") {
    PotentialJet jet;
    jet.coeffs = {Rational(1, 10), 0};
    const auto r = convergence_study(jet, {0.08, 0.04, 0.02, 0.01}, 4);
    CHECK(r.expected_order == 3);
    REQUIRE(r.fits.size() == 4);
    for (const auto& f : r.fits) {
      REQUIRE(f.slope.has_value());
      CHECK(*f.slope >= 2.7);
    }
    CHECK(r.passed);
  }
  SUBCASE("hbar list must decrease") {
    CHECK_THROWS_AS(convergence_study(PotentialJet{}, {0.01, 0.02}, 4), Error);
  }
}

TEST_CASE("fit_line and confining_half_width") {
  const auto f = fit_line({0, 1, 2, 3}, {1, 3, 5, 7});
  CHECK(f.slope == doctest::Approx(2));
  CHECK(f.intercept == doctest::Approx(1));
  CHECK(f.r_squared == doctest::Approx(1));
  // x^2/2 + x^3/5 turns over at x = -5/3.
  const double r = confining_half_width(poly_potential(0.2, 0), 0.0, 3.0);
  CHECK(r == doctest::Approx(5.0 / 3).epsilon(1e-3));
  CHECK(confining_half_width(poly_potential(0, 0), 0.0, 3.0) == 3.0);
}

TEST_CASE("jet_potential matches the exact jet") {
  PotentialJet jet = qbnf::testing::random_jet(9);
  jet.e0 = Rational(1, 3);
  const Potential v = jet_potential(jet);
  for (double x : {-0.7, -0.1, 0.0, 0.3, 1.2}) CHECK(v(x) == doctest::Approx(jet.evaluate(x)).epsilon(1e-14));
}
