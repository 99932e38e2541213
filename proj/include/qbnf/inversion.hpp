#pragma once

#include <vector>

#include "qbnf/normal_form.hpp"

namespace qbnf {

/// Affine dependence of (b_{0,N}, b_{1,N-2}) on the probe coefficients
/// (a_{2N-1}, a_{2N}) with the lower jet held fixed:
///   b_{0,N}   = known_0 + gamma * a_{2N-1} + beta  * a_{2N}
///   b_{1,N-2} = known_2 + delta * a_{2N-1} + cross * a_{2N}
/// At N = 2 the probe a_3 enters quadratically and the same numbers are the
/// coefficients of a_3^2 instead.
struct ProbeAffineModel {
  int stage = 0;
  Rational beta;
  Rational gamma;
  Rational delta;
  Rational cross;
  Rational known_0;
  Rational known_2;
  /// a_3 of the prefix (zero at N = 2).
  Rational a3;

  /// delta / a_3 for N >= 3, delta itself at N = 2.
  Rational delta_normalized() const;
};

/// Probes forward() at (a_{2N-1}, a_{2N}) in {(0,0), (1,0), (0,1)} on top of
/// prefix a_3..a_{2N-2} and checks the fit at (1,1). Throws
/// EngineInconsistency if the fit fails or beta vanishes, DegenerateA3 if
/// delta vanishes because a_3 = 0.
ProbeAffineModel fit_stage(const PotentialJet& prefix, int n);

struct LowOrderRecovery {
  Rational a3;
  Rational a4;
  /// False when sqrt(b10/kappa) is irrational and a3 is a rational
  /// lower bound within 2^-160 / den.
  bool exact = true;
  ProbeAffineModel model;
};

/// a_3 = sign_choice * sqrt(b10 / kappa), a_4 from the fitted N = 2 model.
/// Throws NegativeDiscriminant if b10 / kappa < 0.
LowOrderRecovery recover_a3_a4(const Rational& b02, const Rational& b10, int sign_choice, Sign sign = Sign::Plus);

struct InversionResult {
  PotentialJet jet;
  std::vector<ProbeAffineModel> stages;
  bool exact = true;
};

/// Recovers a_3..a_{2 floor(D/2)} from the QBNF. Throws DegenerateA3 when
/// a_3 = 0 and SingularStage if a stage system is singular.
InversionResult invert_qbnf(const NormalFormSeries& nf, int sign_choice);

/// a_n -> t^{n-2} a_n. Throws ZeroScale for t = 0.
PotentialJet scale_jet(const PotentialJet& jet, const Rational& t);

/// a_n -> (-1)^n a_n, i.e. V(x) -> V(-x).
PotentialJet reflect_jet(const PotentialJet& jet);

}  // namespace qbnf
