#include "flatfloor/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace flatfloor {

Integer factorial(unsigned long n) {
  Integer out;
  mpz_fac_ui(out.get_mpz_t(), n);
  return out;
}

Integer binomial(long n, long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  Integer out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return out;
}

Rational pow(const Rational& base, unsigned long exponent) {
  Rational out;
  mpz_pow_ui(mpq_numref(out.get_mpq_t()), mpq_numref(base.get_mpq_t()), exponent);
  mpz_pow_ui(mpq_denref(out.get_mpq_t()), mpq_denref(base.get_mpq_t()), exponent);
  out.canonicalize();
  return out;
}

Rational rational_from_double(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("non-finite value has no rational form");
  Rational out;
  mpq_set_d(out.get_mpq_t(), value);
  return out;
}

double to_double(const Rational& value) { return value.get_d(); }

std::string to_string(const Rational& value) { return value.get_str(); }

Rational make_rational(const std::string& num, const std::string& den) {
  Rational out;
  try {
    out = Rational(Integer(num), Integer(den));
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("malformed rational '" + num + "/" + den + "'");
  }
  if (out.get_den() == 0) throw std::invalid_argument("zero denominator");
  out.canonicalize();
  return out;
}

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  auto slash = text.find('/');
  if (slash != std::string::npos) return make_rational(text.substr(0, slash), text.substr(slash + 1));

  // decimal literal, optionally signed, optionally with exponent
  std::string mantissa = text;
  long exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string::npos) {
    mantissa = text.substr(0, e);
    try {
      exponent = std::stol(text.substr(e + 1));
    } catch (const std::exception&) {
      throw std::invalid_argument("malformed exponent in '" + text + "'");
    }
  }
  std::string digits;
  long frac_digits = 0;
  bool seen_dot = false;
  for (std::size_t i = 0; i < mantissa.size(); ++i) {
    char c = mantissa[i];
    if ((c == '-' || c == '+') && i == 0) {
      if (c == '-') digits.push_back('-');
    } else if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else if (c >= '0' && c <= '9') {
      digits.push_back(c);
      if (seen_dot) ++frac_digits;
    } else {
      throw std::invalid_argument("malformed rational literal '" + text + "'");
    }
  }
  if (digits.empty() || digits == "-") throw std::invalid_argument("malformed rational literal '" + text + "'");
  Rational out{Integer(digits)};
  long shift = exponent - frac_digits;
  Integer ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
  if (shift < 0) out /= Rational(ten_pow);
  else out *= Rational(ten_pow);
  out.canonicalize();
  return out;
}

}  // namespace flatfloor
