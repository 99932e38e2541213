#include "qbnf/weyl_poly.hpp"

#include <cmath>
#include <sstream>

namespace qbnf {

WeylPoly::WeylPoly(const Rational& constant) {
  if (constant != 0) terms_.emplace(Monomial{}, constant);
}

WeylPoly WeylPoly::monomial(int l, int m, int n, const Rational& coeff) {
  WeylPoly p;
  p.add_term(Monomial{l, m, n}, coeff);
  return p;
}

WeylPoly WeylPoly::omega(Sign sign) {
  WeylPoly p;
  p.add_term({0, 2, 0}, Rational(1, 2));
  p.add_term({2, 0, 0}, Rational(sign_value(sign), 2));
  return p;
}

Rational WeylPoly::coeff(const Monomial& mono) const {
  auto it = terms_.find(mono);
  return it == terms_.end() ? Rational(0) : it->second;
}

void WeylPoly::add_term(const Monomial& mono, const Rational& coeff) {
  if (coeff == 0) return;
  auto [it, inserted] = terms_.try_emplace(mono, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0) terms_.erase(it);
  }
}

std::optional<int> WeylPoly::min_degree() const {
  if (terms_.empty()) return std::nullopt;
  return terms_.begin()->first.degree();
}

std::optional<int> WeylPoly::max_degree() const {
  if (terms_.empty()) return std::nullopt;
  return terms_.rbegin()->first.degree();
}

WeylPoly WeylPoly::truncated(int max_degree) const {
  WeylPoly out;
  for (const auto& [mono, c] : terms_) {
    if (mono.degree() > max_degree) break;
    out.terms_.emplace_hint(out.terms_.end(), mono, c);
  }
  return out;
}

WeylPoly WeylPoly::graded_part(int d) const {
  WeylPoly out;
  for (const auto& [mono, c] : terms_) {
    if (mono.degree() == d) out.terms_.emplace_hint(out.terms_.end(), mono, c);
  }
  return out;
}

WeylPoly WeylPoly::hbar_coefficient(int n) const {
  WeylPoly out;
  for (const auto& [mono, c] : terms_) {
    if (mono.n == n) out.terms_.emplace(Monomial{mono.l, mono.m, 0}, c);
  }
  return out;
}

bool WeylPoly::has_only_even_hbar() const {
  for (const auto& [mono, c] : terms_) {
    if (mono.n % 2 != 0) return false;
  }
  return true;
}

bool WeylPoly::in_w_plus() const {
  for (const auto& [mono, c] : terms_) {
    if (mono.n % 2 != 0 || mono.degree() < 3) return false;
  }
  return true;
}

bool WeylPoly::is_xi_homogeneous() const {
  if (terms_.empty()) return true;
  const int d = terms_.begin()->first.xi_degree();
  for (const auto& [mono, c] : terms_) {
    if (mono.n != 0 || mono.xi_degree() != d) return false;
  }
  return true;
}

namespace {

Integer falling(int k, int p) {
  Integer r = 1;
  for (int i = 0; i < p; ++i) r *= (k - i);
  return r;
}

}  // namespace

WeylPoly WeylPoly::derivative(int dx, int dxi) const {
  WeylPoly out;
  for (const auto& [mono, c] : terms_) {
    if (mono.l < dx || mono.m < dxi) continue;
    out.add_term({mono.l - dx, mono.m - dxi, mono.n}, c * Rational(falling(mono.l, dx) * falling(mono.m, dxi)));
  }
  return out;
}

WeylPoly WeylPoly::operator*(const WeylPoly& other) const {
  WeylPoly out;
  for (const auto& [ma, ca] : terms_) {
    for (const auto& [mb, cb] : other.terms_) {
      out.add_term({ma.l + mb.l, ma.m + mb.m, ma.n + mb.n}, ca * cb);
    }
  }
  return out;
}

WeylPoly& WeylPoly::operator+=(const WeylPoly& other) {
  for (const auto& [mono, c] : other.terms_) add_term(mono, c);
  return *this;
}

WeylPoly& WeylPoly::operator-=(const WeylPoly& other) {
  for (const auto& [mono, c] : other.terms_) add_term(mono, -c);
  return *this;
}

WeylPoly& WeylPoly::operator*=(const Rational& scalar) {
  if (scalar == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [mono, c] : terms_) c *= scalar;
  return *this;
}

WeylPoly WeylPoly::operator-() const {
  WeylPoly out = *this;
  for (auto& [mono, c] : out.terms_) c = -c;
  return out;
}

WeylPoly WeylPoly::pow(unsigned k) const {
  WeylPoly result(Rational(1));
  for (unsigned i = 0; i < k; ++i) result = result * *this;
  return result;
}

double WeylPoly::evaluate(double x, double xi, double hbar) const {
  double sum = 0.0;
  for (const auto& [mono, c] : terms_) {
    sum += to_double(c) * std::pow(x, mono.l) * std::pow(xi, mono.m) * std::pow(hbar, mono.n);
  }
  return sum;
}

std::string WeylPoly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [mono, c] : terms_) {
    Rational mag = c < 0 ? Rational(-c) : c;
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    const bool constant = mono.l == 0 && mono.m == 0 && mono.n == 0;
    bool need_star = false;
    if (mag != 1 || constant) {
      os << to_string(mag);
      need_star = true;
    }
    auto factor = [&](const char* name, int e) {
      if (e == 0) return;
      if (need_star) os << "*";
      os << name;
      if (e > 1) os << "^" << e;
      need_star = true;
    };
    factor("x", mono.l);
    factor("xi", mono.m);
    factor("hbar", mono.n);
  }
  return os.str();
}

}  // namespace qbnf
