#include "qbnf/normal_form.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "exact_linear.hpp"
#include "qbnf/errors.hpp"
#include "qbnf/weyl_algebra.hpp"

namespace qbnf {

Rational PotentialJet::a(int j) const {
  const int idx = j - 3;
  if (idx < 0 || idx >= static_cast<int>(coeffs.size())) return 0;
  return coeffs[idx];
}

void PotentialJet::set(int j, const Rational& value) {
  const int idx = j - 3;
  if (idx < 0) throw Error(ErrorCode::ConfigError, "jet coefficients start at a_3");
  if (idx >= static_cast<int>(coeffs.size())) coeffs.resize(idx + 1, Rational(0));
  coeffs[idx] = value;
}

bool operator==(const PotentialJet& a, const PotentialJet& b) {
  if (a.sign != b.sign || a.e0 != b.e0) return false;
  const int top = std::max(a.order(), b.order());
  for (int j = 3; j <= top; ++j) {
    if (a.a(j) != b.a(j)) return false;
  }
  return true;
}

double PotentialJet::evaluate(double x) const {
  double v = 0.0;
  for (int j = order(); j >= 3; --j) v = (v + to_double(a(j))) * x;
  v = (v + 0.5 * sign_value(sign)) * x * x;
  return to_double(e0) + v;
}

Rational CoefficientSeries::coeff(int j, int k) const {
  auto it = b.find({j, k});
  return it == b.end() ? Rational(0) : it->second;
}

void CoefficientSeries::set(int j, int k, const Rational& value) {
  if (value == 0) b.erase({j, k});
  else b[{j, k}] = value;
}

void CoefficientSeries::add(int j, int k, const Rational& value) { set(j, k, coeff(j, k) + value); }

namespace {

using detail::RatMatrix;
using detail::RatVector;

RatVector coords(const WeylPoly& q, int degree) {
  RatVector v(degree + 1, Rational(0));
  for (const auto& [mono, c] : q.terms()) v[mono.l] = c;
  return v;
}

WeylPoly from_coords(const RatVector& v, int degree) {
  WeylPoly p;
  for (int l = 0; l <= degree; ++l) p.add_term({l, degree - l, 0}, v[l]);
  return p;
}

// Matrix of P -> {Omega_sign, P}_1 on the basis x^l xi^{N-l}.
RatMatrix bracket_matrix(Sign sign, int degree) {
  RatMatrix m(degree + 1, RatVector(degree + 1, Rational(0)));
  for (int l = 0; l <= degree; ++l) {
    if (l >= 1) m[l - 1][l] += l;
    if (l <= degree - 1) m[l + 1][l] -= sign_value(sign) * (degree - l);
  }
  return m;
}

// Left null vector y of the bracket matrix normalized by y . Omega^{N/2} = 1,
// so that y . Q is the obstruction c(Q).
RatVector obstruction_form(Sign sign, int degree) {
  const auto lt = detail::transpose(bracket_matrix(sign, degree), degree + 1);
  const auto basis = detail::null_space(lt, degree + 1);
  if (basis.size() != 1) {
    throw Error(ErrorCode::EngineInconsistency,
                "kernel of the bracket operator in degree " + std::to_string(degree) + " is not one-dimensional");
  }
  RatVector y = basis[0];
  const RatVector w = coords(WeylPoly::omega(sign).pow(degree / 2), degree);
  Rational dot = 0;
  for (int l = 0; l <= degree; ++l) dot += y[l] * w[l];
  for (auto& v : y) v /= dot;
  return y;
}

void check_homogeneous(const WeylPoly& q, int degree) {
  for (const auto& [mono, c] : q.terms()) {
    if (mono.n != 0 || mono.xi_degree() != degree) {
      throw Error(ErrorCode::NotHomogeneous,
                  q.str() + " is not homogeneous of (x,xi)-degree " + std::to_string(degree) + " without hbar");
    }
  }
}

int degree_of(const WeylPoly& q) {
  if (q.is_zero()) return 0;
  if (!q.is_xi_homogeneous()) throw Error(ErrorCode::NotHomogeneous, q.str() + " mixes degrees or contains hbar");
  return q.terms().begin()->first.xi_degree();
}

}  // namespace

HomologicalSolution homological_solve(const WeylPoly& q, Sign sign) { return homological_solve(q, sign, degree_of(q)); }

HomologicalSolution homological_solve(const WeylPoly& q, Sign sign, int degree) {
  if (degree < 0) throw Error(ErrorCode::NotHomogeneous, "negative degree");
  check_homogeneous(q, degree);
  const RatVector rhs = coords(q, degree);
  RatMatrix lhs = bracket_matrix(sign, degree);
  if (degree % 2 == 1) {
    auto p = detail::solve_unique(lhs, rhs);
    if (!p) throw Error(ErrorCode::EngineInconsistency, "odd-degree homological equation is singular");
    return {from_coords(*p, degree), Rational(0)};
  }
  const RatVector y = obstruction_form(sign, degree);
  Rational c = 0;
  for (int l = 0; l <= degree; ++l) c += y[l] * rhs[l];
  const RatVector w = coords(WeylPoly::omega(sign).pow(degree / 2), degree);
  RatVector b = rhs;
  for (int l = 0; l <= degree; ++l) b[l] -= c * w[l];
  // normalization: P in the range of the bracket operator, i.e. y . P = 0
  lhs.push_back(y);
  b.push_back(Rational(0));
  auto p = detail::solve_unique(lhs, b);
  if (!p) throw Error(ErrorCode::EngineInconsistency, "even-degree homological equation has no normalized solution");
  return {from_coords(*p, degree), c};
}

Rational c_functional(const WeylPoly& q, Sign sign) {
  const int degree = degree_of(q);
  if (degree % 2 == 1) return 0;
  const RatVector y = obstruction_form(sign, degree);
  const RatVector v = coords(q, degree);
  Rational c = 0;
  for (int l = 0; l <= degree; ++l) c += y[l] * v[l];
  return c;
}

WeylPoly sigma_poly(int n, Sign sign) {
  if (n < 1) throw Error(ErrorCode::ConfigError, "sigma_poly needs N >= 1");
  return homological_solve(WeylPoly::monomial(2 * n - 1, 0), sign, 2 * n - 1).p;
}

WeylPoly jet_to_hamiltonian(const PotentialJet& jet) {
  WeylPoly h = WeylPoly::omega(jet.sign);
  for (int j = 3; j <= jet.order(); ++j) h.add_term({j, 0, 0}, jet.a(j));
  return h;
}

ForwardResult birkhoff_forward(const WeylPoly& h, Sign sign, int max_degree, const KernelShift& kernel_shift) {
  if (!h.has_only_even_hbar()) throw Error(ErrorCode::NonRealInput, h.str() + " has odd powers of hbar");
  if (!(h.truncated(2) == WeylPoly::omega(sign))) {
    throw Error(ErrorCode::BadQuadraticPart,
                "degree <= 2 part " + h.truncated(2).str() + " differs from " + WeylPoly::omega(sign).str());
  }
  ForwardResult out;
  out.nf.sign = sign;
  out.nf.max_degree = max_degree;
  WeylPoly& s = out.generator.s;
  for (int n = 3; n <= max_degree; ++n) {
    const WeylPoly current = exp_ad(s, h, n).graded_part(n);
    if (!current.has_only_even_hbar()) {
      throw Error(ErrorCode::EngineInconsistency, "odd hbar power in degree " + std::to_string(n));
    }
    for (int j = 0; 4 * j <= n; ++j) {
      const int xdeg = n - 4 * j;
      const auto sol = homological_solve(current.hbar_coefficient(2 * j), sign, xdeg);
      s += sol.p * WeylPoly::monomial(0, 0, 2 * j);
      if (xdeg % 2 == 0) {
        out.nf.set(j, xdeg / 2, sol.c);
        if (kernel_shift && xdeg > 0) {
          const Rational shift = kernel_shift(n, j);
          s += WeylPoly::omega(sign).pow(xdeg / 2) * WeylPoly::monomial(0, 0, 2 * j, shift);
        }
      }
    }
  }
  return out;
}

NormalFormSeries forward(const PotentialJet& jet, int max_degree) {
  auto result = birkhoff_forward(jet_to_hamiltonian(jet), jet.sign, max_degree);
  result.nf.e0 = jet.e0;
  return result.nf;
}

WeylPoly normal_form_symbol(const CoefficientSeries& series) {
  const WeylPoly omega = WeylPoly::omega(series.sign);
  WeylPoly out = omega;
  for (const auto& [idx, c] : series.b) {
    out += omega.pow(idx.second) * WeylPoly::monomial(0, 0, 2 * idx.first, c);
  }
  return out;
}

CoeffMap omega_expansion(const WeylPoly& symbol, Sign sign) {
  const WeylPoly omega = WeylPoly::omega(sign);
  CoeffMap out;
  WeylPoly rest = symbol;
  while (!rest.is_zero()) {
    const Monomial lead = rest.terms().begin()->first;
    const int d = lead.xi_degree();
    if (lead.n % 2 != 0 || d % 2 != 0) {
      throw Error(ErrorCode::EngineInconsistency, symbol.str() + " is not a polynomial in Omega and hbar^2");
    }
    // xi^{2k} appears in Omega^k with coefficient 2^{-k}
    const Rational c = rest.coeff({0, d, lead.n}) * pow(Rational(2), d / 2);
    if (c == 0) {
      throw Error(ErrorCode::EngineInconsistency, symbol.str() + " is not a polynomial in Omega and hbar^2");
    }
    out[{lead.n / 2, d / 2}] = c;
    rest -= omega.pow(d / 2) * WeylPoly::monomial(0, 0, lead.n, c);
  }
  return out;
}

WeylPoly omega_star_power(int k, Sign sign) {
  const WeylPoly omega = WeylPoly::omega(sign);
  WeylPoly p(Rational(1));
  for (int i = 0; i < k; ++i) p = star_product(p, omega, 2 * k);
  return p;
}

namespace {

// Entry [k][i] is the coefficient of hbar^{2i} Omega^{k-2i} in Omega^{*k}.
std::vector<std::vector<Rational>> star_power_table(int kmax, Sign sign) {
  std::vector<std::vector<Rational>> table(kmax + 1);
  for (int k = 0; k <= kmax; ++k) {
    table[k].assign(k / 2 + 1, Rational(0));
    for (const auto& [idx, c] : omega_expansion(omega_star_power(k, sign), sign)) table[k][idx.first] = c;
  }
  return table;
}

}  // namespace

FunctionalNormalForm weyl_to_functional(const NormalFormSeries& nf) {
  const int kmax = nf.max_degree / 2;
  const auto star = star_power_table(kmax, nf.sign);
  // inv[k][t]: Omega^k = sum_t inv[k][t] hbar^{2t} Omega^{*(k-2t)}
  std::vector<std::vector<Rational>> inv(kmax + 1);
  for (int k = 0; k <= kmax; ++k) {
    inv[k].assign(k / 2 + 1, Rational(0));
    inv[k][0] = 1;
    for (int i = 1; 2 * i <= k; ++i) {
      for (int t = 0; 2 * t <= k - 2 * i; ++t) inv[k][i + t] -= star[k][i] * inv[k - 2 * i][t];
    }
  }
  FunctionalNormalForm out;
  out.sign = nf.sign;
  out.e0 = nf.e0;
  out.max_degree = nf.max_degree;
  for (const auto& [idx, c] : nf.b) {
    const auto [j, k] = idx;
    for (int t = 0; 2 * t <= k; ++t) out.add(j + t, k - 2 * t, c * inv[k][t]);
  }
  return out;
}

NormalFormSeries functional_to_weyl(const FunctionalNormalForm& fnf) {
  const auto star = star_power_table(fnf.max_degree / 2, fnf.sign);
  NormalFormSeries out;
  out.sign = fnf.sign;
  out.e0 = fnf.e0;
  out.max_degree = fnf.max_degree;
  for (const auto& [idx, c] : fnf.b) {
    const auto [j, k] = idx;
    for (int i = 0; 2 * i <= k; ++i) out.add(j + i, k - 2 * i, c * star[k][i]);
  }
  return out;
}

std::map<int, Rational> classical_part(const NormalFormSeries& nf) {
  std::map<int, Rational> out;
  for (const auto& [idx, c] : nf.b) {
    if (idx.first == 0) out[idx.second] = c;
  }
  return out;
}

}  // namespace qbnf
