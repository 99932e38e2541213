#include "qbnf/weyl_algebra.hpp"

#include <string>
#include <vector>

#include "qbnf/errors.hpp"

namespace qbnf {

namespace {

using i128 = __int128;

template <typename Int>
Int falling(int k, int p) {
  Int r = 1;
  for (int i = 0; i < p; ++i) r *= (k - i);
  return r;
}

template <typename Int>
Int binom(int n, int k) {
  Int b = 1;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

template <typename Int>
Int bracket_weight_impl(const Monomial& a, const Monomial& b, int j) {
  Int sum = 0;
  for (int p = 0; p <= j; ++p) {
    if (a.l < p || a.m < j - p || b.l < j - p || b.m < p) continue;
    Int term = binom<Int>(j, p) * falling<Int>(a.l, p) * falling<Int>(a.m, j - p) *
               falling<Int>(b.l, j - p) * falling<Int>(b.m, p);
    if (p % 2) sum -= term;
    else sum += term;
  }
  return sum;
}

// Every summand of {x^a, x^b}_j lands on the same monomial
// x^{la+lb-j} xi^{ma+mb-j} hbar^{na+nb}; this returns its integer weight.
Integer bracket_weight(const Monomial& a, const Monomial& b, int j) {
  if (a.xi_degree() <= 16 && b.xi_degree() <= 16) {
    i128 w = bracket_weight_impl<i128>(a, b, j);
    const bool negative = w < 0;
    unsigned __int128 mag = negative ? static_cast<unsigned __int128>(-w) : static_cast<unsigned __int128>(w);
    Integer out = static_cast<unsigned long long>(mag >> 64);
    out <<= 64;
    out += static_cast<unsigned long long>(mag & 0xFFFFFFFFFFFFFFFFull);
    return negative ? Integer(-out) : out;
  }
  return bracket_weight_impl<Integer>(a, b, j);
}

bool bracket_possible(const Monomial& a, const Monomial& b, int j) {
  return a.xi_degree() >= j && b.xi_degree() >= j && a.l + b.l >= j && a.m + b.m >= j;
}

void require_w_plus(const WeylPoly& s, const char* op) {
  if (!s.in_w_plus()) {
    throw Error(ErrorCode::NotInWPlus, std::string(op) + ": generator " + s.str() +
                                           " must have even hbar powers and graded degree >= 3");
  }
}

}  // namespace

WeylPoly bracket_j(const WeylPoly& a, const WeylPoly& b, int j) {
  WeylPoly out;
  if (j < 0) return out;
  for (const auto& [ma, ca] : a.terms()) {
    for (const auto& [mb, cb] : b.terms()) {
      if (!bracket_possible(ma, mb, j)) continue;
      const Integer w = bracket_weight(ma, mb, j);
      if (w == 0) continue;
      out.add_term({ma.l + mb.l - j, ma.m + mb.m - j, ma.n + mb.n}, ca * cb * Rational(w));
    }
  }
  return out;
}

WeylPoly star_product(const WeylPoly& a, const WeylPoly& b, int max_degree) {
  WeylPoly real_part;
  WeylPoly imaginary_part;
  for (const auto& [ma, ca] : a.terms()) {
    for (const auto& [mb, cb] : b.terms()) {
      if (ma.degree() + mb.degree() > max_degree) continue;
      const int jmax = std::min(ma.xi_degree(), mb.xi_degree());
      for (int j = 0; j <= jmax; ++j) {
        if (!bracket_possible(ma, mb, j)) continue;
        const Integer w = bracket_weight(ma, mb, j);
        if (w == 0) continue;
        // (hbar/2i)^j / j! = hbar^j (-i)^j / (2^j j!)
        Rational c = ca * cb * Rational(w) / (pow(Rational(2), j) * factorial(j));
        const Monomial mono{ma.l + mb.l - j, ma.m + mb.m - j, ma.n + mb.n + j};
        switch (j % 4) {
          case 0: real_part.add_term(mono, c); break;
          case 1: imaginary_part.add_term(mono, -c); break;
          case 2: real_part.add_term(mono, -c); break;
          case 3: imaginary_part.add_term(mono, c); break;
        }
      }
    }
  }
  if (!imaginary_part.is_zero()) {
    throw Error(ErrorCode::NonRealResult, "imaginary part " + imaginary_part.str() + " does not cancel");
  }
  return real_part;
}

WeylPoly ad_series(const WeylPoly& s, const WeylPoly& h, int max_degree) {
  require_w_plus(s, "ad_series");
  WeylPoly out;
  std::vector<Rational> weights;  // (1/(2j+1)!) (-1/4)^j
  for (const auto& [ms, cs] : s.terms()) {
    for (const auto& [mh, ch] : h.terms()) {
      // every bracket of the pair lands in graded degree deg S + deg H - 2
      if (ms.degree() + mh.degree() - 2 > max_degree) continue;
      const int jmax = std::min(ms.xi_degree(), mh.xi_degree());
      for (int k = 0; 2 * k + 1 <= jmax; ++k) {
        const int j = 2 * k + 1;
        if (!bracket_possible(ms, mh, j)) continue;
        const Integer w = bracket_weight(ms, mh, j);
        if (w == 0) continue;
        while (weights.size() <= static_cast<std::size_t>(k)) {
          const auto kk = static_cast<unsigned>(weights.size());
          Rational wk = Rational(1) / (factorial(2 * kk + 1) * pow(Rational(4), kk));
          if (kk % 2) wk = -wk;
          weights.push_back(wk);
        }
        out.add_term({ms.l + mh.l - j, ms.m + mh.m - j, ms.n + mh.n + 2 * k},
                     cs * ch * Rational(w) * weights[k]);
      }
    }
  }
  return out;
}

WeylPoly exp_ad(const WeylPoly& s, const WeylPoly& h, int max_degree) {
  require_w_plus(s, "exp_ad");
  WeylPoly result = h.truncated(max_degree);
  if (s.is_zero()) return result;
  WeylPoly term = result;
  // the k-th iterate has graded degree >= min_degree(H) + k, so this terminates
  for (unsigned k = 1; !term.is_zero(); ++k) {
    term = ad_series(s, term, max_degree);
    term *= Rational(1, k);
    result += term;
  }
  return result;
}

}  // namespace qbnf
