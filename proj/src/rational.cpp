#include "qbnf/rational.hpp"

#include <cctype>

#include "qbnf/errors.hpp"

namespace qbnf {

const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NonRealResult: return "NonRealResult";
    case ErrorCode::NotInWPlus: return "NotInWPlus";
    case ErrorCode::NotHomogeneous: return "NotHomogeneous";
    case ErrorCode::BadQuadraticPart: return "BadQuadraticPart";
    case ErrorCode::NonRealInput: return "NonRealInput";
    case ErrorCode::EngineInconsistency: return "EngineInconsistency";
    case ErrorCode::NegativeDiscriminant: return "NegativeDiscriminant";
    case ErrorCode::DegenerateA3: return "DegenerateA3";
    case ErrorCode::SingularStage: return "SingularStage";
    case ErrorCode::ZeroScale: return "ZeroScale";
    case ErrorCode::WrongSign: return "WrongSign";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::WindowError: return "WindowError";
    case ErrorCode::FitError: return "FitError";
    case ErrorCode::VerificationFailure: return "VerificationFailure";
  }
  return "Unknown";
}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::ConfigError:
      return 2;
    case ErrorCode::VerificationFailure:
      return 4;
    case ErrorCode::NonRealResult:
    case ErrorCode::EngineInconsistency:
    case ErrorCode::SingularStage:
      return 5;
    default:
      return 3;
  }
}

std::string to_string(const Rational& r) {
  const Integer num = boost::multiprecision::numerator(r);
  const Integer den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

namespace {

bool is_integer_literal(std::string_view s, bool allow_sign) {
  if (s.empty()) return false;
  std::size_t i = 0;
  if (allow_sign && (s[0] == '-' || s[0] == '+')) i = 1;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

Integer parse_integer(std::string_view s) {
  std::string text(s);
  if (!text.empty() && text[0] == '+') text.erase(0, 1);
  return Integer(text);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  const std::string_view num_text = text.substr(0, slash);
  if (!is_integer_literal(num_text, true)) {
    throw Error(ErrorCode::ParseError, "not a rational literal: '" + std::string(text) + "'");
  }
  const Integer num = parse_integer(num_text);
  if (slash == std::string_view::npos) return Rational(num);
  const std::string_view den_text = text.substr(slash + 1);
  if (!is_integer_literal(den_text, false)) {
    throw Error(ErrorCode::ParseError, "bad denominator in '" + std::string(text) + "'");
  }
  const Integer den = parse_integer(den_text);
  if (den == 0) throw Error(ErrorCode::ParseError, "zero denominator in '" + std::string(text) + "'");
  return Rational(num, den);
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

Rational pow(const Rational& base, unsigned exponent) {
  Rational result = 1;
  Rational b = base;
  while (exponent > 0) {
    if (exponent & 1u) result *= b;
    b *= b;
    exponent >>= 1;
  }
  return result;
}

Rational factorial(unsigned n) {
  Integer f = 1;
  for (unsigned i = 2; i <= n; ++i) f *= i;
  return Rational(f);
}

Rational binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  Integer b = 1;
  for (unsigned i = 1; i <= k; ++i) {
    b *= n - k + i;
    b /= i;
  }
  return Rational(b);
}

SqrtResult rational_sqrt(const Rational& r, unsigned bits) {
  if (r < 0) throw Error(ErrorCode::NegativeDiscriminant, "square root of " + to_string(r));
  const Integer p = boost::multiprecision::numerator(r);
  const Integer q = boost::multiprecision::denominator(r);
  const Integer sp = boost::multiprecision::sqrt(p);
  const Integer sq = boost::multiprecision::sqrt(q);
  if (sp * sp == p && sq * sq == q) return {Rational(sp, sq), true};
  const Integer scale = Integer(1) << bits;
  const Integer root = boost::multiprecision::sqrt(p * q * scale * scale);
  return {Rational(root, q * scale), false};
}

}  // namespace qbnf
