#pragma once

#include "qbnf/weyl_poly.hpp"

namespace qbnf {

/// Sentinel for "no truncation".
inline constexpr int kNoTruncation = 1 << 20;

/// {a,b}_j = sum_p C(j,p) (-1)^p (d_x^p d_xi^{j-p} a)(d_x^{j-p} d_xi^p b).
/// j = 1 is the Poisson bracket a_xi b_x - a_x b_xi.
WeylPoly bracket_j(const WeylPoly& a, const WeylPoly& b, int j);

/// Moyal product sum_j (1/j!)(hbar/2i)^j {a,b}_j truncated at graded degree
/// max_degree. Throws NonRealResult when the odd-j (imaginary) part does not
/// cancel.
WeylPoly star_product(const WeylPoly& a, const WeylPoly& b, int max_degree);

/// (i/hbar)[S,H]^star as the real series
/// sum_j (1/(2j+1)!) (-1/4)^j hbar^{2j} {S,H}_{2j+1}, truncated at max_degree.
/// Requires S in W+.
WeylPoly ad_series(const WeylPoly& s, const WeylPoly& h, int max_degree);

/// exp((i/hbar) ad(S)^star) H = sum_k (1/k!) ad_series^k(S, H), truncated.
/// Requires S in W+.
WeylPoly exp_ad(const WeylPoly& s, const WeylPoly& h, int max_degree);

}  // namespace qbnf
