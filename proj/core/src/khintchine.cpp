#include "cfp/khintchine.hpp"

#include "cfp/error.hpp"
#include "cfp/measure.hpp"
#include "cfp/numeric.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>

namespace cfp {

namespace {

constexpr long double kLdNegInf = -std::numeric_limits<long double>::infinity();

// log a_k in extended precision; power kinds are re-evaluated from their
// parameters rather than through the double-precision evaluator.
long double log_a(const ParameterFunction& a, long k) {
  if (a.is_power_kind()) {
    return std::log(static_cast<long double>(a.q())) +
           (static_cast<long double>(a.p()) - 1) * std::log(static_cast<long double>(k)) +
           static_cast<long double>(k) * static_cast<long double>(a.log_h());
  }
  if (k > a.max_index()) return kLdNegInf;
  const double v = a(static_cast<int>(k));
  return v > 0 ? std::log(static_cast<long double>(v)) : kLdNegInf;
}

struct Scaled {
  std::vector<long double> v;  // values / exp(log_scale), peak 1
  long double log_scale = 0;
  long lo = 0;                 // first nonzero index
  bool zero = false;
};

void renormalize(Scaled& s) {
  long double peak = 0;
  for (auto x : s.v) peak = std::max(peak, x);
  if (!(peak > 0)) {
    s.zero = true;
    return;
  }
  for (auto& x : s.v) x /= peak;
  s.log_scale += std::log(peak);
  s.lo = 0;
  while (s.lo < static_cast<long>(s.v.size()) && s.v[s.lo] == 0) ++s.lo;
}

Scaled multiply(const Scaled& a, const Scaled& b, long N) {
  Scaled c;
  c.v.assign(static_cast<std::size_t>(N) + 1, 0.0L);
  c.log_scale = a.log_scale + b.log_scale;
  if (a.zero || b.zero) {
    c.zero = true;
    return c;
  }
  for (long i = a.lo; i <= N; ++i) {
    const long double ai = a.v[i];
    if (ai == 0) continue;
    const long top = N - i;
    for (long j = b.lo; j <= top; ++j) c.v[i + j] += ai * b.v[j];
  }
  renormalize(c);
  return c;
}

}  // namespace

long double delta_floor(const ParameterFunction& a) {
  return a.is_power_kind() ? std::max(0.0L, static_cast<long double>(a.log_h())) : 0.0L;
}

TiltedVariable::TiltedVariable(const ParameterFunction& a, long double delta) : a_(a), delta_(delta) {
  if (!(delta > 0) || !std::isfinite(delta)) throw ConfigError("delta must be positive");
  if (!(delta > delta_floor(a))) throw ConfigError("series S(delta) diverges: delta must exceed log h");
  // Moment sums about the support minimum 1: t_j = sum (k-1)^j a_k e^{-delta k},
  // each term scaled by e^{-shift} with shift = log a_1 - delta to stay in range.
  const long double shift = log_a(a, 1) - delta;
  CompensatedSum<long double> t0, t1, t2, t3;
  const long double rate = a.is_power_kind() ? delta - static_cast<long double>(a.log_h()) : delta;
  const long double expo = a.is_power_kind() ? static_cast<long double>(a.p()) + 2 : 0;
  const long limit = a.is_power_kind() ? std::numeric_limits<long>::max() : a.max_index();
  long k = 1;
  long double tail = 0;
  for (; k <= limit; ++k) {
    const long double la = log_a(a, k);
    if (la == kLdNegInf) continue;
    const long double w = std::exp(la - delta * static_cast<long double>(k) - shift);
    const long double m = static_cast<long double>(k - 1);
    t0 += w;
    t1 += m * w;
    t2 += m * m * w;
    t3 += m * m * m * w;
    if (a.is_power_kind() && static_cast<long double>(k) * rate > expo) {
      const long double kd = static_cast<long double>(k);
      const long double r = std::pow((kd + 1) / kd, expo) * std::exp(-rate);
      if (r < 1) {
        const long double next3 = kd * kd * kd * w * std::pow((kd + 1) / kd, expo - 2) * std::exp(-rate);
        tail = next3 / (1 - r);
        if (tail <= 1e-19L * std::max(t3.value(), t0.value())) break;
      }
    }
    if (k > 2'000'000'000L) throw ModelError("tilted series did not converge; delta too small");
  }
  K_ = std::min(k, limit);
  tail_ = tail;
  S_ = t0.value() * std::exp(shift);
  const long double e1 = t1.value() / t0.value(), e2 = t2.value() / t0.value(), e3 = t3.value() / t0.value();
  mean_ = 1 + e1;
  var_ = e2 - e1 * e1;
  mu3_ = e3 - 3 * e1 * e2 + 2 * e1 * e1 * e1;
}

long double TiltedVariable::log_pmf(long l) const {
  if (l < 1) return kLdNegInf;
  const long double la = log_a(a_, l);
  if (la == kLdNegInf) return kLdNegInf;
  return la - delta_ * static_cast<long double>(l) - std::log(S_);
}

long double TiltedVariable::pmf(long l) const { return std::exp(log_pmf(l)); }

std::vector<long double> TiltedVariable::pmf_table(long L) const {
  std::vector<long double> out(static_cast<std::size_t>(std::max(L, 0L)) + 1, 0.0L);
  for (long l = 1; l <= L; ++l) out[l] = pmf(l);
  return out;
}

SumMoments TiltedVariable::moments(long n) const {
  const long double nn = static_cast<long double>(n);
  return {nn * mean_, nn * var_, nn * mu3_};
}

long double series_S(long double delta, const ParameterFunction& a) { return TiltedVariable(a, delta).S(); }

long double solve_delta_alpha(long double alpha, const ParameterFunction& a) {
  if (!(alpha >= 1)) throw ConfigError("alpha = N/n must be at least 1");
  const long double floor = delta_floor(a);
  auto mean_at = [&](long double d) { return TiltedVariable(a, d).mean(); };

  if (alpha - 1 <= 1e-13L) {
    long double d = floor + 1;
    while (mean_at(d) - 1 > 1e-13L) d += 4;
    return d;
  }

  long double width = a.is_power_kind() ? static_cast<long double>(a.p()) / alpha : 1.0L;
  long double lo = floor + width / 2, hi = floor + 2 * width;
  int guard = 0;
  while (mean_at(lo) <= alpha) {
    lo = floor + (lo - floor) / 4;
    if (++guard > 400 || !(lo > floor)) {
      throw ModelError("free-parameter equation has no root: sum k a_k converges below alpha = " +
                       std::to_string(static_cast<double>(alpha)));
    }
  }
  guard = 0;
  while (mean_at(hi) >= alpha) {
    hi = floor + (hi - floor) * 4;
    if (++guard > 200) throw ModelError("free-parameter equation: cannot bracket the root");
  }
  auto fdf = [&](long double d) {
    const TiltedVariable tv(a, d);
    return std::pair<long double, long double>{tv.mean() - alpha, -tv.variance()};
  };
  const long double tol = 1e-18L * (lo + hi);
  auto r = safeguarded_newton<long double>(fdf, lo, hi, tol);
  if (std::abs(r.residual) > 1e-12L * alpha) {
    throw ModelError("free-parameter equation did not reach relative residual 1e-12");
  }
  return r.root;
}

long double solve_delta(long n, long N, const ParameterFunction& a) {
  if (n < 1 || N < 1) throw ConfigError("solve_delta needs n, N >= 1");
  if (n > N) throw ConfigError("solve_delta needs n <= N");
  return solve_delta_alpha(static_cast<long double>(N) / static_cast<long double>(n), a);
}

ConvolutionMass convolution_power_at(const std::vector<long double>& pmf, long n, long N) {
  if (n < 0 || N < 0) throw ConfigError("convolution needs n, N >= 0");
  if (static_cast<long>(pmf.size()) < N + 1) throw ConfigError("pmf truncation K is below the target N");
  Scaled result;
  result.v.assign(static_cast<std::size_t>(N) + 1, 0.0L);
  result.v[0] = 1;
  Scaled base;
  base.v.assign(pmf.begin(), pmf.begin() + N + 1);
  renormalize(base);
  int stages = 0;
  for (long e = n; e > 0; e >>= 1) {
    if (e & 1) {
      result = multiply(result, base, N);
      ++stages;
    }
    if (e > 1) {
      base = multiply(base, base, N);
      ++stages;
    }
  }
  ConvolutionMass out;
  if (result.zero || result.v[N] == 0) {
    out.probability = 0;
    out.log_probability = kLdNegInf;
  } else {
    out.log_probability = std::log(result.v[N]) + result.log_scale;
    out.probability = std::exp(out.log_probability);
  }
  out.error_estimate = static_cast<double>(stages) * static_cast<double>(N + 1) * LDBL_EPSILON;
  return out;
}

ConvolutionMass sum_pmf(long n, const TiltedVariable& tv, long N) {
  return convolution_power_at(tv.pmf_table(N), n, N);
}

double representation_log_probability(long n, long N, long double delta, const ParameterFunction& a) {
  if (N < 1) throw ConfigError("representation needs N >= 1");
  if (n < 1 || n > N) return -std::numeric_limits<double>::infinity();
  const TiltedVariable tv(a, delta);
  const auto mass = sum_pmf(n, tv, N);
  if (mass.log_probability == kLdNegInf) return -std::numeric_limits<double>::infinity();
  const long double log_c = log_partition_function(static_cast<int>(N), a).back();
  const long double v = static_cast<long double>(n) * tv.log_S() + delta * static_cast<long double>(N) +
                        mass.log_probability - log_c - std::lgamma(static_cast<long double>(n) + 1);
  return static_cast<double>(v);
}

double representation_probability(long n, long N, long double delta, const ParameterFunction& a) {
  return std::exp(representation_log_probability(n, N, delta, a));
}

}  // namespace cfp
