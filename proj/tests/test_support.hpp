#pragma once

#include <random>

#include "qbnf/normal_form.hpp"
#include "qbnf/weyl_poly.hpp"

namespace qbnf::testing {

inline std::mt19937_64& rng() {
  static std::mt19937_64 engine(20240611);
  return engine;
}

inline Rational random_rational(int span = 9, int max_den = 6) {
  std::uniform_int_distribution<int> num(-span, span);
  std::uniform_int_distribution<int> den(1, max_den);
  return Rational(num(rng()), den(rng()));
}

inline Rational random_nonzero_rational(int span = 9, int max_den = 6) {
  Rational r;
  do {
    r = random_rational(span, max_den);
  } while (r == 0);
  return r;
}

/// `terms` random monomials with l + m in [min_deg, max_deg] and hbar power
/// drawn from {0, .., max_hbar} with the given step.
inline WeylPoly random_poly(int terms, int min_deg, int max_deg, int max_hbar = 0, int hbar_step = 1) {
  std::uniform_int_distribution<int> deg(min_deg, max_deg);
  std::uniform_int_distribution<int> hb(0, max_hbar / hbar_step);
  WeylPoly p;
  for (int i = 0; i < terms; ++i) {
    const int d = deg(rng());
    std::uniform_int_distribution<int> split(0, d);
    const int l = split(rng());
    p.add_term(Monomial{l, d - l, hb(rng()) * hbar_step}, random_nonzero_rational());
  }
  return p;
}

/// Random jet a_3..a_order with a_3 != 0.
inline PotentialJet random_jet(int order, Sign sign = Sign::Plus) {
  PotentialJet jet;
  jet.sign = sign;
  jet.coeffs.push_back(random_nonzero_rational());
  for (int j = 4; j <= order; ++j) jet.coeffs.push_back(random_rational());
  return jet;
}

}  // namespace qbnf::testing
