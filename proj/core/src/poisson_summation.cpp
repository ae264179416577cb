#include "cfp/poisson_summation.hpp"

#include "cfp/error.hpp"
#include "cfp/numeric.hpp"

#include <quadmath.h>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace cfp {

namespace {

using cld = std::complex<long double>;
constexpr long double kTwoPi = 2 * std::numbers::pi_v<long double>;

struct ComplexSum {
  CompensatedSum<long double> re, im;
  void add(cld v) {
    re.add(v.real());
    im.add(v.imag());
  }
  cld value() const { return {re.value(), im.value()}; }
};

// Oscillating sums (Im z != 0) cancel down to far below the sum of term
// moduli, so they are accumulated in quad precision with e^{-zk} advanced
// by exact-order complex multiplication.
SeriesResult direct_complex(cld z, long double p, long double rel_tol) {
  using q = __float128;
  const q x = static_cast<q>(z.real());
  const q pm1 = static_cast<q>(p) - 1;
  const bool integer_p = std::floor(p) == p && p <= 64;
  const q wr = expq(-x) * cosq(-static_cast<q>(z.imag()));
  const q wi = expq(-x) * sinq(-static_cast<q>(z.imag()));
  const q decay = expq(-x);
  q pr = 1, pi = 0, em = 1;  // e^{-zk}, e^{-xk}
  q sr = 0, si = 0, moduli = 0;
  long k = 1;
  long double last_tail = 0;
  const long max_terms = 400'000'000L;
  for (; k < max_terms; ++k) {
    const q nr = pr * wr - pi * wi;
    pi = pr * wi + pi * wr;
    pr = nr;
    q mag;
    if (integer_p) {
      mag = 1;
      for (int e = 0; e < static_cast<int>(p) - 1; ++e) mag *= static_cast<q>(k);
    } else {
      mag = expq(pm1 * logq(static_cast<q>(k)));
    }
    sr += mag * pr;
    si += mag * pi;
    em *= decay;
    const q modulus = mag * em;
    moduli += modulus;
    const long double kd = static_cast<long double>(k);
    const long double grow = p > 1 ? std::pow((kd + 2) / (kd + 1), p - 1) : 1.0L;
    const long double r = grow * std::exp(-z.real());
    if (r < 1) {
      last_tail = static_cast<long double>(modulus) * r / (1 - r);
      const long double scale = std::hypot(static_cast<long double>(sr), static_cast<long double>(si));
      if (last_tail <= rel_tol * scale) break;
    }
  }
  if (k >= max_terms) throw ModelError("direct series did not converge; Re z too small");
  SeriesResult out;
  out.value = cld(static_cast<long double>(sr), static_cast<long double>(si));
  out.route = SeriesRoute::direct;
  out.terms = k;
  const long double scale = std::abs(out.value);
  out.error_estimate = scale > 0 ? static_cast<double>((last_tail + static_cast<long double>(moduli) * 1e-32L *
                                                                        std::sqrt(static_cast<long double>(k))) /
                                                       scale)
                                 : 0.0;
  return out;
}

// Positive terms: extended precision is enough.
SeriesResult direct_real(long double x, long double p, long double rel_tol) {
  CompensatedSum<long double> sum;
  const long max_terms = 2'000'000'000L;
  long k = 1;
  long double last_tail = 0;
  for (; k < max_terms; ++k) {
    const long double kd = static_cast<long double>(k);
    sum.add(std::exp((p - 1) * std::log(kd) - x * kd));
    const long double grow = p > 1 ? std::pow((kd + 2) / (kd + 1), p - 1) : 1.0L;
    const long double r = grow * std::exp(-x);
    if (r < 1) {
      const long double next = std::exp((p - 1) * std::log(kd + 1) - x * (kd + 1));
      last_tail = next / (1 - r);
      if (last_tail <= rel_tol * sum.value()) break;
    }
  }
  if (k >= max_terms) throw ModelError("direct series did not converge; Re z too small");
  SeriesResult out;
  out.value = sum.value();
  out.route = SeriesRoute::direct;
  out.terms = k;
  out.error_estimate = static_cast<double>(last_tail / sum.value() + std::sqrt(static_cast<long double>(k)) * 1e-19L);
  return out;
}

SeriesResult direct(cld z, long double p, long double rel_tol) {
  return z.imag() == 0 ? direct_real(z.real(), p, rel_tol) : direct_complex(z, p, rel_tol);
}

// Euler-Maclaurin sum over l > L of f(l) = (z + 2 pi i s l)^(-p), s = +-1,
// without the integral term (returned separately so p = 1 can pair them).
cld tail_corrections(cld z, long double p, long double s, long L) {
  const cld w = cld(0, kTwoPi * s);
  const cld base = z + w * static_cast<long double>(L);
  // f^{(m)}(L) = (-p)(-p-1)...(-p-m+1) w^m base^{-p-m}
  auto deriv = [&](int m) {
    cld coef = 1;
    for (int i = 0; i < m; ++i) coef *= (-p - static_cast<long double>(i)) * w;
    return coef * std::pow(base, -p - static_cast<long double>(m));
  };
  const cld f = std::pow(base, -p);
  // B2/2!, B4/4!, B6/6!
  constexpr long double b2 = 1.0L / 12, b4 = -1.0L / 720, b6 = 1.0L / 30240;
  return -f / 2.0L - b2 * deriv(1) - b4 * deriv(3) - b6 * deriv(5);
}

cld tail_integral(cld z, long double p, long double s, long L) {
  const cld w = cld(0, kTwoPi * s);
  return std::pow(z + w * static_cast<long double>(L), 1 - p) / ((p - 1) * w);
}

SeriesResult poisson(cld z, long double p, long double rel_tol, long cutoff) {
  if (p < 1) throw ConfigError("Poisson summation route needs p >= 1");
  long L = cutoff;
  if (L <= 0) {
    // the Euler-Maclaurin remainder after the B6 term is of order
    // (p)_7 |2 pi L|^{-p-7}; 64 lattice points plus |Im z| coverage keeps
    // it far below long double resolution for the supported p.
    L = 64 + static_cast<long>(std::ceil(std::abs(z.imag()) / kTwoPi));
  }
  (void)rel_tol;
  ComplexSum sum;
  sum.add(std::pow(z, -p));
  for (long l = 1; l <= L; ++l) {
    const cld w(0, kTwoPi * static_cast<long double>(l));
    sum.add(std::pow(z + w, -p));
    sum.add(std::pow(z - w, -p));
  }
  const cld corr = tail_corrections(z, p, 1, L) + tail_corrections(z, p, -1, L);
  cld integral;
  if (p == 1) {
    // paired integral of 1/(z+2 pi i x) + 1/(z-2 pi i x) over x > L
    integral = std::atan(z / (kTwoPi * static_cast<long double>(L))) / std::numbers::pi_v<long double>;
  } else {
    integral = tail_integral(z, p, 1, L) + tail_integral(z, p, -1, L);
  }
  cld total = sum.value() + corr + integral;
  if (p == 1) {
    total -= 0.5L;  // boundary term: f(0) = 1 is counted with weight 1/2 by symmetric summation
  } else {
    total *= std::tgamma(p);
  }
  SeriesResult out;
  out.value = total;
  out.route = SeriesRoute::poisson;
  out.terms = 2 * L + 1;
  long double rem = 1;
  for (int i = 0; i < 7; ++i) rem *= (p + i);
  rem *= std::pow(kTwoPi * static_cast<long double>(L), -p - 7) / 1209600.0L;  // B8/8!
  const long double scale = std::abs(out.value);
  out.error_estimate = static_cast<double>((scale > 0 ? 2 * rem * std::tgamma(p) / scale : 0) + 64e-19L);
  return out;
}

}  // namespace

const char* to_string(SeriesRoute route) {
  switch (route) {
    case SeriesRoute::automatic: return "auto";
    case SeriesRoute::poisson: return "poisson";
    case SeriesRoute::direct: return "direct";
  }
  return "?";
}

SeriesResult power_exp_series(std::complex<long double> z, long double p, long double rel_tol,
                              SeriesRoute route, long lattice_cutoff) {
  if (!(z.real() > 0)) throw ConfigError("power_exp_series needs Re z > 0");
  if (!(p > 0)) throw ConfigError("power_exp_series needs p > 0");
  if (route == SeriesRoute::automatic) {
    route = (p >= 1 && z.real() < 0.5L) ? SeriesRoute::poisson : SeriesRoute::direct;
  }
  if (route == SeriesRoute::poisson) return poisson(z, p, rel_tol, lattice_cutoff);
  return direct(z, p, rel_tol);
}

long double power_exp_sum(long double delta, long double p, long double rel_tol) {
  return direct(cld(delta, 0), p, rel_tol).value.real();
}

}  // namespace cfp
