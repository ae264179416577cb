#include "cfp/numeric.hpp"
#include "cfp/rational.hpp"
#include "cfp/error.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <cctype>
#include <string>

namespace cfp {

double log_sum_exp(std::span<const double> x) {
  constexpr double ninf = -std::numeric_limits<double>::infinity();
  if (x.empty()) return ninf;
  const double m = *std::max_element(x.begin(), x.end());
  if (m == ninf) return ninf;
  double s = 0.0;
  for (double v : x) s += std::exp(v - m);
  return m + std::log(s);
}

double chi_square_survival(double statistic, double dof) {
  if (dof <= 0) throw ConfigError("chi-square needs positive degrees of freedom");
  if (statistic <= 0) return 1.0;
  boost::math::chi_squared_distribution<double> dist(dof);
  return boost::math::cdf(boost::math::complement(dist, statistic));
}

double fitted_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw ConfigError("slope fit needs >= 2 points");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

// ---- rationals ------------------------------------------------------------

Rational parse_rational(std::string_view text) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }),
          s.end());
  if (s.empty()) throw ConfigError("empty number");
  if (s.find('/') != std::string::npos) {
    Rational r;
    if (r.set_str(s, 10) != 0) throw ConfigError("bad rational literal: " + s);
    if (r.get_den() == 0) throw ConfigError("zero denominator: " + s);
    r.canonicalize();
    return r;
  }
  // decimal with optional exponent
  std::size_t pos = 0;
  bool negative = false;
  if (s[pos] == '+' || s[pos] == '-') negative = s[pos++] == '-';
  std::string digits;
  long exponent = 0;
  bool seen_point = false, seen_digit = false;
  for (; pos < s.size(); ++pos) {
    const char c = s[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      seen_digit = true;
      if (seen_point) --exponent;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else if (c == 'e' || c == 'E') {
      ++pos;
      try {
        std::size_t used = 0;
        exponent += std::stol(s.substr(pos), &used);
        pos += used;
      } catch (const std::exception&) {
        throw ConfigError("bad exponent in number: " + s);
      }
      break;
    } else {
      throw ConfigError("bad number: " + s);
    }
  }
  if (!seen_digit || pos != s.size()) throw ConfigError("bad number: " + s);
  Integer mantissa(digits, 10);
  Rational r(mantissa);
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
  if (exponent >= 0) {
    r *= Rational(scale);
  } else {
    r /= Rational(scale);
  }
  r.canonicalize();
  return negative ? Rational(-r) : r;
}

namespace {
double log_of_integer(const Integer& z) {
  long exp2 = 0;
  const double mant = mpz_get_d_2exp(&exp2, z.get_mpz_t());
  return std::log(std::abs(mant)) + static_cast<double>(exp2) * std::log(2.0);
}
}  // namespace

double log_of(const Rational& value) {
  if (sgn(value) <= 0) {
    if (sgn(value) == 0) return -std::numeric_limits<double>::infinity();
    throw ModelError("log of a negative rational");
  }
  return log_of_integer(value.get_num()) - log_of_integer(value.get_den());
}

double to_double(const Rational& value) {
  if (sgn(value) == 0) return 0.0;
  const double direct = value.get_d();
  if (direct != 0.0 && std::isfinite(direct)) return direct;
  const double l = log_of(abs(value));
  return (sgn(value) < 0 ? -1.0 : 1.0) * std::exp(l);
}

Rational factorial(unsigned n) {
  Integer f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return Rational(f);
}

Rational power(const Rational& x, unsigned e) {
  Integer num, den;
  mpz_pow_ui(num.get_mpz_t(), x.get_num_mpz_t(), e);
  mpz_pow_ui(den.get_mpz_t(), x.get_den_mpz_t(), e);
  Rational r(num, den);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& value) { return value.get_str(10); }

}  // namespace cfp
