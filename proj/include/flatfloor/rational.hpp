#pragma once

#include <gmpxx.h>

#include <string>

namespace flatfloor {

using Rational = mpq_class;
using Integer = mpz_class;

Integer factorial(unsigned long n);
Integer binomial(long n, long k);

Rational pow(const Rational& base, unsigned long exponent);

/// Exact conversion: every finite double is a dyadic rational.
Rational rational_from_double(double value);

double to_double(const Rational& value);

/// "num/den" (or "num" when den == 1).
std::string to_string(const Rational& value);

/// Parses "num/den", "num", or a decimal literal such as "0.25" exactly.
Rational parse_rational(const std::string& text);
Rational make_rational(const std::string& num, const std::string& den);

}  // namespace flatfloor
