#ifndef CFP_RATIONAL_HPP
#define CFP_RATIONAL_HPP

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace cfp {

using Rational = mpq_class;
using Integer = mpz_class;

/// Which arithmetic produced a result. Every public distribution carries one.
enum class Arithmetic { rational, floating };

inline const char* to_string(Arithmetic mode) {
  return mode == Arithmetic::rational ? "rational" : "float";
}

/// Parses "3", "-2/7", "0.125" or "1e-3" into an exact rational.
/// Decimal input is taken at face value (0.1 becomes 1/10).
Rational parse_rational(std::string_view text);

/// Natural log of a positive rational, accurate for huge numerators and
/// denominators (values far outside double range).
double log_of(const Rational& value);

/// Nearest double; correct even when numerator and denominator overflow.
double to_double(const Rational& value);

Rational factorial(unsigned n);

/// x^e for a non-negative integer exponent.
Rational power(const Rational& x, unsigned e);

std::string to_string(const Rational& value);

}  // namespace cfp

#endif  // CFP_RATIONAL_HPP
