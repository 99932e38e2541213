#pragma once

#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "qbnf/rational.hpp"
#include "qbnf/weyl_poly.hpp"

namespace qbnf {

inline constexpr int kDefaultMaxDegree = 10;

/// Taylor jet of V(x) = E0 + (sign/2) x^2 + sum_{j>=3} a_j x^j at a
/// nondegenerate critical point. a_2 = sign/2 is implied.
struct PotentialJet {
  Sign sign = Sign::Plus;
  Rational e0 = 0;
  std::vector<Rational> coeffs;  // a_3, a_4, ..., a_M

  /// Highest stored Taylor order M (2 when no coefficient is stored).
  int order() const { return 2 + static_cast<int>(coeffs.size()); }
  /// a_j for j >= 3; zero beyond the stored order.
  Rational a(int j) const;
  void set(int j, const Rational& value);
  double evaluate(double x) const;

  /// Trailing zero coefficients do not affect equality.
  friend bool operator==(const PotentialJet& a, const PotentialJet& b);
};

/// (j, k) indexes hbar^{2j} Omega^k; its Weyl grading is 4j + 2k.
struct CoeffIndexOrder {
  bool operator()(const std::pair<int, int>& a, const std::pair<int, int>& b) const {
    const int ga = 4 * a.first + 2 * a.second;
    const int gb = 4 * b.first + 2 * b.second;
    if (ga != gb) return ga < gb;
    return a.first < b.first;
  }
};

using CoeffMap = std::map<std::pair<int, int>, Rational, CoeffIndexOrder>;

/// Sparse series sum b_{j,k} hbar^{2j} Omega^k (2j + k >= 2) on top of the
/// implicit leading Omega. Only nonzero entries with 4j + 2k <= max_degree
/// are stored.
struct CoefficientSeries {
  Sign sign = Sign::Plus;
  Rational e0 = 0;
  int max_degree = kDefaultMaxDegree;
  CoeffMap b;

  Rational coeff(int j, int k) const;
  void set(int j, int k, const Rational& value);
  void add(int j, int k, const Rational& value);

  friend bool operator==(const CoefficientSeries&, const CoefficientSeries&) = default;
};

/// Weyl-symbol QBNF: B = Omega + sum b_{j,k} hbar^{2j} Omega^k.
struct NormalFormSeries : CoefficientSeries {};

/// Operator form: B^ = Omega^ + sum bhat_{j,k} hbar^{2j} Omega^^k.
struct FunctionalNormalForm : CoefficientSeries {};

/// S = S_3 + S_4 + ... in W+.
struct Generator {
  WeylPoly s;
};

struct HomologicalSolution {
  WeylPoly p;
  Rational c;
};

/// Solves {Omega_sign, P}_1 = Q - c Omega_sign^{N/2} for homogeneous Q of
/// (x, xi)-degree N without hbar. c = 0 for odd N. P has no component along
/// the kernel direction Omega^{N/2}. Throws NotHomogeneous.
HomologicalSolution homological_solve(const WeylPoly& q, Sign sign);
/// Same, with the degree given explicitly (needed when Q is zero).
HomologicalSolution homological_solve(const WeylPoly& q, Sign sign, int degree);

/// The obstruction c_sign(Q) of homological_solve.
Rational c_functional(const WeylPoly& q, Sign sign);

/// Sigma_{2N-1}: the solution of {Omega_sign, Sigma}_1 = x^{2N-1}.
WeylPoly sigma_poly(int n, Sign sign);

/// Omega_sign + sum_{j>=3} a_j x^j. E0 is not part of the symbol.
WeylPoly jet_to_hamiltonian(const PotentialJet& jet);

/// Hook for the uniqueness tests: called at every even stage n with the hbar
/// power 2j; the returned multiple of hbar^{2j} Omega^{(n-4j)/2} is added to S.
using KernelShift = std::function<Rational(int n, int j)>;

struct ForwardResult {
  NormalFormSeries nf;
  Generator generator;
};

/// Degree-by-degree Birkhoff reduction of H = Omega_sign + O(3) through
/// exp_ad. Throws BadQuadraticPart / NonRealInput.
ForwardResult birkhoff_forward(const WeylPoly& h, Sign sign, int max_degree,
                               const KernelShift& kernel_shift = {});

/// birkhoff_forward(jet_to_hamiltonian(jet)) with E0 carried over.
NormalFormSeries forward(const PotentialJet& jet, int max_degree);

/// Omega + sum b_{j,k} hbar^{2j} Omega^k as a polynomial symbol.
WeylPoly normal_form_symbol(const CoefficientSeries& series);

/// Expresses a symbol that is a polynomial in (hbar^2, Omega_sign) by its
/// coefficients; throws EngineInconsistency if it is not one. The (0,1)
/// entry is included in the map.
CoeffMap omega_expansion(const WeylPoly& symbol, Sign sign);

/// Star power Omega^{*k}, a polynomial in Omega and hbar^2.
WeylPoly omega_star_power(int k, Sign sign);

FunctionalNormalForm weyl_to_functional(const NormalFormSeries& nf);
NormalFormSeries functional_to_weyl(const FunctionalNormalForm& fnf);

/// The classical Birkhoff normal form {k -> b_{0,k}}.
std::map<int, Rational> classical_part(const NormalFormSeries& nf);

}  // namespace qbnf
