#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "qbnf/dos_probe.hpp"
#include "qbnf/errors.hpp"

using namespace qbnf;

namespace {

Potential harmonic() {
  return [](double x) { return 0.5 * x * x; };
}

Potential double_well(double k) {
  return [k](double x) { return -0.5 * k * x * x + 0.25 * x * x * x * x; };
}

SampledFunction bump(double lo, double hi, int samples) {
  SampledFunction f;
  for (int i = 0; i <= samples; ++i) {
    const double t = static_cast<double>(i) / samples;
    const double s = std::sin(std::numbers::pi * t);
    f.x.push_back(lo + (hi - lo) * t);
    f.y.push_back(i == 0 || i == samples ? 0.0 : s * s);
  }
  return f;
}

// int int f(xi^2/2 + V(x)) dx dxi by the midpoint rule.
double phase_space_integral(const Potential& v, const SampledFunction& f, double half_width, int cells) {
  const double h = 2 * half_width / cells;
  double sum = 0;
  for (int i = 0; i < cells; ++i) {
    const double vx = v(-half_width + (i + 0.5) * h);
    for (int j = 0; j < cells; ++j) {
      const double xi = -half_width + (j + 0.5) * h;
      sum += f(0.5 * xi * xi + vx);
    }
  }
  return sum * h * h;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::VerificationFailure;
}

}  // namespace

TEST_CASE("smoothed_dos trivial cases") {
  const auto s = compute_dos_sample(harmonic(), 0.01, 0.009, 0.021);
  CHECK(smoothed_dos(s, SampledFunction{}) == 0);
  SampledFunction f{{0.01, 0.015, 0.02}, {0, 1, 0}};
  CHECK(smoothed_dos(s, f) == doctest::Approx(1.0).epsilon(1e-9));
  SampledFunction outside{{0.0, 0.015, 0.03}, {0, 1, 0}};
  CHECK(code_of([&] { smoothed_dos(s, outside); }) == ErrorCode::WindowError);
}

TEST_CASE("eigenvalue comb is accurate") {
  const auto s = compute_dos_sample(harmonic(), 0.01, 0.2, 0.3);
  REQUIRE(!s.eigenvalues.empty());
  for (double lambda : s.eigenvalues) {
    const double n = std::round(lambda / 0.01 - 0.5);
    CHECK(std::abs(lambda - 0.01 * (n + 0.5)) < 1e-7);
  }
}

TEST_CASE("window must stay inside the box") {
  CHECK(code_of([] { compute_dos_sample(harmonic(), 0.01, 0.5, 4.0); }) == ErrorCode::WindowError);
}

TEST_CASE("Weyl law on a regular window") {
  const Potential v = [](double x) { return 0.5 * x * x + 0.1 * x * x * x * x; };
  const SampledFunction f = bump(0.2, 0.6, 4000);
  const double hbar = 0.01;
  const auto s = compute_dos_sample(v, hbar, 0.2, 0.6);
  const double quantum = 2 * std::numbers::pi * hbar * smoothed_dos(s, f);
  const double classical = phase_space_integral(v, f, 1.5, 3000);
  CHECK(std::abs(quantum - classical) < 0.03 * classical);
}

TEST_CASE("classical period") {
  CHECK(classical_period(harmonic(), 0.3, -2.5, 2.5) == doctest::Approx(2 * std::numbers::pi).epsilon(1e-8));
  CHECK(classical_period(harmonic(), -0.1, -2.5, 2.5) == 0);
  // Above the barrier of the double well the period is finite and grows toward E0.
  const double near = classical_period(double_well(1), 0.01, -2.5, 2.5);
  const double far = classical_period(double_well(1), 0.3, -2.5, 2.5);
  CHECK(near > far);
}

TEST_CASE("log singularity at a local maximum") {
  const std::vector<double> hbars = {0.02, 0.01, 0.005};
  const auto r1 = log_singularity_fit(double_well(1), hbars, 0.45);
  CHECK(r1.relative_error < 0.10);
  for (const auto& s : r1.samples) CHECK(s.log_selected);
  CHECK(r1.analytic_coefficient == doctest::Approx(2.0).epsilon(1e-6));

  const auto r2 = log_singularity_fit(double_well(2), hbars, 0.45);
  CHECK(r2.relative_error < 0.10);
  const double ratio = r1.coefficient / r2.coefficient;
  const double classical_ratio = r1.classical_coefficient / r2.classical_coefficient;
  CHECK(std::abs(ratio - classical_ratio) < 0.05 * classical_ratio);
  CHECK(std::abs(ratio - std::sqrt(2.0)) < 0.1 * std::sqrt(2.0));

  CHECK(code_of([&] { log_singularity_fit(harmonic(), hbars, 0.45); }) == ErrorCode::FitError);
}

TEST_CASE("Heaviside jump at a local minimum") {
  const std::vector<double> hbars = {0.02, 0.01, 0.005};
  const auto r = heaviside_jump_fit(harmonic(), hbars, -0.3, 0.5);
  CHECK(r.detected);
  CHECK(std::abs(r.ratio - 1) < 0.05);

  const Potential cubic = [](double x) { return 0.5 * x * x + 0.1 * x * x * x; };
  const auto rc = heaviside_jump_fit(cubic, hbars, -0.3, 0.5);
  CHECK(std::abs(rc.ratio - 1) < 0.05);

  JumpFitOptions above;
  above.probe_energy = 0.25;
  const auto ra = heaviside_jump_fit(harmonic(), {0.005}, -0.3, 0.5, {}, above);
  CHECK_FALSE(ra.detected);

  CHECK(code_of([&] { heaviside_jump_fit(harmonic(), hbars, -0.01, 0.5); }) == ErrorCode::FitError);
}

TEST_CASE("density data is two columns") {
  const auto s = compute_dos_sample(harmonic(), 0.01, 0.1, 0.2);
  std::istringstream in(density_data(s, 0.1, 0.2, 11));
  int lines = 0;
  double e = 0, rho = 0;
  while (in >> e >> rho) {
    ++lines;
    CHECK(rho == doctest::Approx(100.0).epsilon(0.01));
  }
  CHECK(lines == 11);
}
