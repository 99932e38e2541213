#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>

#include "qbnf/rational.hpp"

namespace qbnf {

/// x^l xi^m hbar^n. Graded degree is l + m + 2n.
struct Monomial {
  int l = 0;
  int m = 0;
  int n = 0;

  constexpr int degree() const { return l + m + 2 * n; }
  constexpr int xi_degree() const { return l + m; }

  friend constexpr bool operator==(const Monomial&, const Monomial&) = default;
};

/// Canonical term order: graded degree, then hbar power, then descending x power.
struct MonomialOrder {
  bool operator()(const Monomial& a, const Monomial& b) const {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    if (a.n != b.n) return a.n < b.n;
    return a.l > b.l;
  }
};

enum class Sign { Plus = 1, Minus = -1 };

inline int sign_value(Sign s) { return static_cast<int>(s); }
inline char sign_char(Sign s) { return s == Sign::Plus ? '+' : '-'; }

/// Sparse polynomial in x, xi, hbar with exact rational coefficients.
/// Zero coefficients are never stored.
class WeylPoly {
 public:
  using TermMap = std::map<Monomial, Rational, MonomialOrder>;

  WeylPoly() = default;
  explicit WeylPoly(const Rational& constant);

  static WeylPoly monomial(int l, int m, int n = 0, const Rational& coeff = 1);
  static WeylPoly x() { return monomial(1, 0); }
  static WeylPoly xi() { return monomial(0, 1); }
  static WeylPoly hbar() { return monomial(0, 0, 1); }
  /// Omega_+ = (xi^2 + x^2)/2, Omega_- = (xi^2 - x^2)/2.
  static WeylPoly omega(Sign sign);

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  Rational coeff(const Monomial& mono) const;

  void add_term(const Monomial& mono, const Rational& coeff);

  /// Lowest / highest graded degree; nullopt for the zero polynomial.
  std::optional<int> min_degree() const;
  std::optional<int> max_degree() const;

  /// Terms with graded degree <= max_degree.
  WeylPoly truncated(int max_degree) const;
  /// Terms of graded degree exactly d.
  WeylPoly graded_part(int d) const;
  /// Coefficient of hbar^n as a polynomial in (x, xi).
  WeylPoly hbar_coefficient(int n) const;

  bool has_only_even_hbar() const;
  /// Even hbar powers only and every term of graded degree >= 3.
  bool in_w_plus() const;
  /// True when all terms share one (x, xi)-degree and there is no hbar.
  bool is_xi_homogeneous() const;

  /// d^dx/dx^dx d^dxi/dxi^dxi.
  WeylPoly derivative(int dx, int dxi) const;

  /// Commutative (pointwise) product.
  WeylPoly operator*(const WeylPoly& other) const;
  WeylPoly& operator+=(const WeylPoly& other);
  WeylPoly& operator-=(const WeylPoly& other);
  WeylPoly& operator*=(const Rational& scalar);
  WeylPoly operator-() const;

  friend WeylPoly operator+(WeylPoly a, const WeylPoly& b) { return a += b; }
  friend WeylPoly operator-(WeylPoly a, const WeylPoly& b) { return a -= b; }
  friend WeylPoly operator*(WeylPoly a, const Rational& s) { return a *= s; }
  friend WeylPoly operator*(const Rational& s, WeylPoly a) { return a *= s; }
  friend bool operator==(const WeylPoly& a, const WeylPoly& b) { return a.terms_ == b.terms_; }

  WeylPoly pow(unsigned k) const;

  double evaluate(double x, double xi, double hbar) const;

  /// Human-readable form, e.g. "-x^2*xi - 2/3*xi^3".
  std::string str() const;

 private:
  TermMap terms_;
};

}  // namespace qbnf
