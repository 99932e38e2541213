// Acceptance checks: one PASS/FAIL line per criterion.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#include "qbnf/dos_probe.hpp"
#include "qbnf/inversion.hpp"
#include "qbnf/normal_form.hpp"
#include "qbnf/spectra.hpp"
#include "qbnf/weyl_algebra.hpp"
#include "test_support.hpp"

using namespace qbnf;
using qbnf::testing::random_jet;
using qbnf::testing::random_nonzero_rational;
using qbnf::testing::random_rational;

namespace {

// Tolerances and limits.
constexpr double kLimit1 = 1.0;
constexpr double kLimit2 = 120.0;
constexpr double kLimit3 = 30.0;
constexpr double kLimit10 = 300.0;
constexpr double kMinSlopeGap = 1.0;
constexpr double kLogTolerance = 0.10;
constexpr double kJumpTolerance = 0.05;

const Rational kKappa(1, 2);

struct Outcome {
  bool ok;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, double limit_seconds, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o{false, ""};
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (limit_seconds > 0 && secs > limit_seconds) {
    o.ok = false;
    o.detail += " (over time limit)";
  }
  if (!o.ok) ++failures;
  std::printf("%s  %2d  %-44s %8.2fs  %s\n", o.ok ? "PASS" : "FAIL", id, name, secs, o.detail.c_str());
  std::fflush(stdout);
}

PotentialJet ab_jet(const Rational& a, const Rational& b) {
  PotentialJet jet;
  jet.coeffs = {a, b};
  return jet;
}

PotentialJet zoll_jet(int order) {
  std::vector<Rational> root(order + 1);
  Rational binom = 1;
  for (int k = 0; k <= order; ++k) {
    root[k] = binom * pow(Rational(2), k);
    binom = binom * (Rational(1, 2) - k) / (k + 1);
  }
  root[0] -= 1;
  PotentialJet jet;
  for (int n = 3; n <= order; ++n) {
    Rational c = 0;
    for (int i = 0; i <= n; ++i) c += root[i] * root[n - i] / 2;
    jet.set(n, c);
  }
  return jet;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

}  // namespace

int main() {
  criterion(1, "first-terms b02 = -15/4 a^2 + 3/2 b", kLimit1, [] {
    for (int i = 0; i < 20; ++i) {
      const Rational a = random_rational(), b = random_rational();
      if (forward(ab_jet(a, b), 4).coeff(0, 2) != Rational(-15, 4) * a * a + Rational(3, 2) * b) {
        return Outcome{false, "mismatch at a=" + to_string(a) + " b=" + to_string(b)};
      }
    }
    return Outcome{true, "20 random pairs exact"};
  });

  criterion(2, "hbar^2 coefficient kappa and arbitration", kLimit2, [] {
    for (int i = 0; i < 10; ++i) {
      const Rational a = random_nonzero_rational();
      if (forward(ab_jet(a, random_rational()), 4).coeff(1, 0) != kKappa * a * a) {
        return Outcome{false, "b10 != a^2/2 at a=" + to_string(a)};
      }
    }
    // kappa = 1/2 against the alternative kappa = 1 (b10 = a^2).
    const PotentialJet jet = ab_jet(Rational(1, 10), 0);
    const std::vector<double> hbars = {0.08, 0.04, 0.02, 0.01};
    const NormalFormSeries nf = forward(jet, 6);
    NormalFormSeries alt = nf;
    alt.set(1, 0, jet.a(3) * jet.a(3));
    const auto computed = convergence_study(jet, nf, hbars);
    const auto alternative = convergence_study(jet, alt, hbars);
    double min_gap = 1e9;
    std::string slopes;
    for (int n = 0; n < 4; ++n) {
      const auto& c = computed.fits[n].slope;
      const auto& w = alternative.fits[n].slope;
      if (!c || !w) return Outcome{false, "missing slope at level " + std::to_string(n)};
      min_gap = std::min(min_gap, *c - *w);
      slopes += fmt(" n%.0f:%.2f/%.2f", n, *c, *w);
    }
    return Outcome{min_gap >= kMinSlopeGap, "kappa=1/2, min slope gap " + fmt("%.2f", min_gap) + slopes};
  });

  criterion(3, "inversion roundtrip, 10 jets, degree 10", kLimit3, [] {
    for (int i = 0; i < 10; ++i) {
      const PotentialJet jet = random_jet(10);
      const auto r = invert_qbnf(forward(jet, 10), jet.a(3) > 0 ? 1 : -1);
      if (!(r.jet == jet)) return Outcome{false, "jet " + std::to_string(i) + " not recovered"};
    }
    return Outcome{true, "exact"};
  });

  criterion(4, "parity and homogeneity", 0, [] {
    for (int trial = 0; trial < 3; ++trial) {
      const PotentialJet jet = random_jet(10);
      const auto nf = forward(jet, 10);
      if (!(forward(reflect_jet(jet), 10) == nf)) return Outcome{false, "parity"};
      for (const Rational t : {Rational(2), Rational(-3), Rational(1, 2)}) {
        const auto nft = forward(scale_jet(jet, t), 10);
        for (int j = 0; 4 * j <= 10; ++j) {
          for (int k = 0; 4 * j + 2 * k <= 10; ++k) {
            if (2 * j + k < 2) continue;
            if (nft.coeff(j, k) != pow(t, 2 * (2 * j + k) - 2) * nf.coeff(j, k)) {
              return Outcome{false, "scaling at t=" + to_string(t)};
            }
          }
        }
      }
    }
    return Outcome{true, "t in {2, -3, 1/2}, 4j+2k <= 10"};
  });

  criterion(5, "gauge counterexample", 0, [] {
    const WeylPoly x = WeylPoly::x(), xi = WeylPoly::xi();
    const WeylPoly s = xi - Rational(3) * x * x;
    const auto nf = birkhoff_forward(Rational(1, 2) * (s * s + x * x), Sign::Plus, 10).nf;
    return Outcome{nf.b.empty(), std::to_string(nf.b.size()) + " nonzero b"};
  });

  criterion(6, "Zoll potential", 0, [] {
    const auto nf = forward(zoll_jet(10), 10);
    for (int k = 2; 2 * k <= 10; ++k) {
      if (nf.coeff(0, k) != 0) return Outcome{false, "b0," + std::to_string(k) + " != 0"};
    }
    const bool ok = nf.coeff(1, 0) == kKappa / 4 && nf.coeff(1, 0) != 0;
    return Outcome{ok, "b10 = " + to_string(nf.coeff(1, 0))};
  });

  criterion(7, "induction non-degeneracy N = 2..6", 0, [] {
    std::string detail;
    for (int n = 2; n <= 6; ++n) {
      const auto m = fit_stage(n == 2 ? PotentialJet{} : random_jet(2 * n - 2), n);
      if (m.beta == 0 || m.delta == 0) return Outcome{false, "vanishing coefficient at N=" + std::to_string(n)};
      detail += " N" + std::to_string(n) + ":" + to_string(m.delta_normalized());
      if (n == 2) continue;
      // hbar^2 source -(1/48)(a {S_3, x^{2N-1}}_3 + a_3 {Sigma_{2N-1}, x^3}_3) per unit a a_3.
      const WeylPoly source =
          Rational(-1, 48) * (bracket_j(sigma_poly(2, Sign::Plus), WeylPoly::monomial(2 * n - 1, 0), 3) +
                              bracket_j(sigma_poly(n, Sign::Plus), WeylPoly::monomial(3, 0), 3));
      const Rational pattern((n - 1) * (2 * n * n - 4 * n + 3), 3);
      if (source.coeff(Monomial{2 * n - 4, 0, 0}) != pattern) return Outcome{false, "x^{2N-4} pattern"};
      if (c_functional(source, Sign::Plus) != m.delta_normalized()) return Outcome{false, "delta vs source"};
      if ((m.delta_normalized() > 0) != (pattern > 0)) return Outcome{false, "delta sign"};
    }
    return Outcome{true, "delta/a3" + detail};
  });

  criterion(8, "Sigma polynomials N = 1..8", 0, [] {
    for (int n = 1; n <= 8; ++n) {
      const WeylPoly s = sigma_poly(n, Sign::Plus);
      if (bracket_j(WeylPoly::omega(Sign::Plus), s, 1) != WeylPoly::monomial(2 * n - 1, 0)) {
        return Outcome{false, "bracket at N=" + std::to_string(n)};
      }
      if (s.coeff(Monomial{2 * n - 2, 1, 0}) != -1) return Outcome{false, "leading term at N=" + std::to_string(n)};
      if (n >= 2 && s.coeff(Monomial{2 * n - 4, 3, 0}) != Rational(-(2 * n - 2), 3)) {
        return Outcome{false, "second term at N=" + std::to_string(n)};
      }
    }
    return Outcome{true, "exact"};
  });

  criterion(9, "star associativity and functional form", 0, [] {
    const WeylPoly omega = WeylPoly::omega(Sign::Plus);
    for (int trial = 0; trial < 3; ++trial) {
      WeylPoly p[3];
      for (auto& q : p)
        for (int k = 0; k <= 2; ++k) q += random_rational() * omega.pow(k);
      if (star_product(star_product(p[0], p[1], 10), p[2], 10) != star_product(p[0], star_product(p[1], p[2], 10), 10)) {
        return Outcome{false, "associativity"};
      }
    }
    if (star_product(omega, omega, kNoTruncation) != omega * omega - WeylPoly::monomial(0, 0, 2, Rational(1, 4))) {
      return Outcome{false, "Omega*Omega"};
    }
    for (int i = 0; i < 10; ++i) {
      const Rational a = random_rational(), b = random_rational();
      const auto fnf = weyl_to_functional(forward(ab_jet(a, b), 4));
      for (int n = 0; n <= 5; ++n) {
        if (predicted_hbar2_coefficient(fnf, n) != perturbation_oracle_exact(a, b, n)) {
          return Outcome{false, "hbar^2 prediction at n=" + std::to_string(n)};
        }
      }
    }
    return Outcome{true, "exact"};
  });

  criterion(10, "DOS log singularity and Heaviside jump", kLimit10, [] {
    const Potential well = [](double x) { return -0.5 * x * x + 0.25 * x * x * x * x; };
    const auto log = log_singularity_fit(well, {0.02, 0.01, 0.005}, 0.45);
    const Potential harmonic = [](double x) { return 0.5 * x * x; };
    const auto jump = heaviside_jump_fit(harmonic, {0.02, 0.01, 0.005}, -0.3, 0.5);
    const bool ok = log.relative_error < kLogTolerance && std::abs(jump.ratio - 1) < kJumpTolerance;
    return Outcome{ok, fmt("c=%.4f vs classical %.4f, jump ratio %.5f", log.coefficient, log.classical_coefficient,
                           jump.ratio)};
  });

  std::printf("%s: %d failing\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
