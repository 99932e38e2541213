#include "qbnf/inversion.hpp"

#include <string>

#include "qbnf/errors.hpp"

namespace qbnf {

Rational ProbeAffineModel::delta_normalized() const {
  if (stage == 2 || a3 == 0) return delta;
  return delta / a3;
}

namespace {

struct ProbeValue {
  Rational b0;
  Rational b2;
};

ProbeValue probe(const PotentialJet& prefix, int n, int odd, int even) {
  PotentialJet jet = prefix;
  jet.set(2 * n - 1, odd);
  jet.set(2 * n, even);
  const NormalFormSeries nf = forward(jet, 2 * n);
  return {nf.coeff(0, n), nf.coeff(1, n - 2)};
}

}  // namespace

ProbeAffineModel fit_stage(const PotentialJet& prefix, int n) {
  if (n < 2) throw Error(ErrorCode::ConfigError, "stages start at N = 2");
  PotentialJet base;
  base.sign = prefix.sign;
  base.e0 = prefix.e0;
  for (int j = 3; j <= 2 * n - 2; ++j) base.set(j, prefix.a(j));

  const ProbeValue p00 = probe(base, n, 0, 0);
  const ProbeValue p10 = probe(base, n, 1, 0);
  const ProbeValue p01 = probe(base, n, 0, 1);
  const ProbeValue p11 = probe(base, n, 1, 1);

  ProbeAffineModel model;
  model.stage = n;
  model.a3 = n == 2 ? Rational(0) : base.a(3);
  model.known_0 = p00.b0;
  model.known_2 = p00.b2;
  model.gamma = p10.b0 - p00.b0;
  model.beta = p01.b0 - p00.b0;
  model.delta = p10.b2 - p00.b2;
  model.cross = p01.b2 - p00.b2;

  if (p11.b0 != model.known_0 + model.gamma + model.beta || p11.b2 != model.known_2 + model.delta + model.cross) {
    throw Error(ErrorCode::EngineInconsistency,
                "stage " + std::to_string(n) + " is not affine in (a_" + std::to_string(2 * n - 1) + ", a_" +
                    std::to_string(2 * n) + ")");
  }
  if (model.beta == 0) throw Error(ErrorCode::EngineInconsistency, "beta vanishes at stage " + std::to_string(n));
  if (model.delta == 0) {
    if (n >= 3 && model.a3 == 0) {
      throw Error(ErrorCode::DegenerateA3, "a_3 = 0: stage " + std::to_string(n) + " cannot see a_" + std::to_string(2 * n - 1));
    }
    throw Error(ErrorCode::EngineInconsistency, "delta vanishes at stage " + std::to_string(n));
  }
  return model;
}

LowOrderRecovery recover_a3_a4(const Rational& b02, const Rational& b10, int sign_choice, Sign sign) {
  PotentialJet empty;
  empty.sign = sign;
  LowOrderRecovery out;
  out.model = fit_stage(empty, 2);
  const auto& m = out.model;
  // b10 = known_2 + kappa a3^2, b02 = known_0 + gamma a3^2 + beta a4
  const Rational a3_squared = (b10 - m.known_2) / m.delta;
  if (a3_squared < 0) {
    throw Error(ErrorCode::NegativeDiscriminant,
                "b_{1,0} = " + to_string(b10) + " gives a_3^2 = " + to_string(a3_squared));
  }
  const SqrtResult root = rational_sqrt(a3_squared);
  out.a3 = sign_choice < 0 ? Rational(-root.value) : root.value;
  out.exact = root.exact;
  out.a4 = (b02 - m.known_0 - m.gamma * a3_squared) / m.beta;
  return out;
}

InversionResult invert_qbnf(const NormalFormSeries& nf, int sign_choice) {
  InversionResult out;
  out.jet.sign = nf.sign;
  out.jet.e0 = nf.e0;
  if (nf.max_degree < 4) return out;

  const auto low = recover_a3_a4(nf.coeff(0, 2), nf.coeff(1, 0), sign_choice, nf.sign);
  if (low.a3 == 0) throw Error(ErrorCode::DegenerateA3, "recovered a_3 vanishes; higher coefficients are not determined");
  out.exact = low.exact;
  out.jet.set(3, low.a3);
  out.jet.set(4, low.a4);
  out.stages.push_back(low.model);

  for (int n = 3; 2 * n <= nf.max_degree; ++n) {
    const ProbeAffineModel m = fit_stage(out.jet, n);
    const Rational r0 = nf.coeff(0, n) - m.known_0;
    const Rational r2 = nf.coeff(1, n - 2) - m.known_2;
    // [gamma beta; delta cross] (a_odd, a_even) = (r0, r2)
    const Rational det = m.gamma * m.cross - m.beta * m.delta;
    if (det == 0) throw Error(ErrorCode::SingularStage, "stage " + std::to_string(n) + " system is singular");
    out.jet.set(2 * n - 1, (r0 * m.cross - m.beta * r2) / det);
    out.jet.set(2 * n, (m.gamma * r2 - m.delta * r0) / det);
    out.stages.push_back(m);
  }
  return out;
}

PotentialJet scale_jet(const PotentialJet& jet, const Rational& t) {
  if (t == 0) throw Error(ErrorCode::ZeroScale, "scale factor must be nonzero");
  PotentialJet out = jet;
  for (int j = 3; j <= jet.order(); ++j) out.set(j, jet.a(j) * pow(t, j - 2));
  return out;
}

PotentialJet reflect_jet(const PotentialJet& jet) { return scale_jet(jet, Rational(-1)); }

}  // namespace qbnf
