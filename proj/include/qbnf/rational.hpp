#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/gmp.hpp>

namespace qbnf {

using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;
// GMP keeps mpq values canonical: denominator > 0 and gcd(num, den) = 1.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

/// Canonical "p/q" form; integers are written without a denominator.
std::string to_string(const Rational& r);

/// Accepts "p", "-p", "p/q" (q != 0). Throws Error(ParseError) otherwise.
Rational parse_rational(std::string_view text);

double to_double(const Rational& r);

Rational pow(const Rational& base, unsigned exponent);

Rational factorial(unsigned n);

Rational binomial(unsigned n, unsigned k);

struct SqrtResult {
  Rational value;
  bool exact;
};

/// Square root of a non-negative rational. When the root is irrational the
/// result is the lower bound floor(sqrt(p*q*4^bits)) / (q*2^bits), whose
/// error is below 1/(q*2^bits).
SqrtResult rational_sqrt(const Rational& r, unsigned bits = 160);

}  // namespace qbnf
