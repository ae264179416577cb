#include "cfp/measure.hpp"

#include "cfp/error.hpp"
#include "cfp/numeric.hpp"
#include "cfp/parallel.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

namespace cfp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_N(int N) {
  if (N < 0) throw ConfigError("N must be non-negative");
}

// log(k a_k) for k = 1..N (index 0 unused)
std::vector<double> log_mass_weights(int N, const ParameterFunction& a) {
  std::vector<double> lw(static_cast<std::size_t>(N) + 1, kNegInf);
  for (int k = 1; k <= N; ++k) lw[k] = std::log(static_cast<double>(k)) + a.log_value(k);
  return lw;
}

std::vector<Rational> exact_mass_weights(int N, const ParameterFunction& a) {
  std::vector<Rational> w(static_cast<std::size_t>(N) + 1);
  for (int k = 1; k <= N; ++k) w[k] = k * a.exact(k);
  return w;
}

void require_exact(const ParameterFunction& a) {
  if (!a.has_exact()) {
    throw ConfigError("rational mode needs an exactly representable parameter function, got " +
                      a.describe());
  }
}

GroupCountDistribution make_count_result(int N, std::string method, Arithmetic mode) {
  GroupCountDistribution d;
  d.mode = mode;
  d.method = std::move(method);
  for (int n = (N == 0 ? 0 : 1); n <= N; ++n) d.support.push_back(n);
  d.probability.assign(d.support.size(), 0.0);
  return d;
}

GroupCountDistribution counts_by_enumeration(int N, const ParameterFunction& a, Arithmetic mode,
                                             int guard) {
  const auto states = enumerate_partitions(N, guard);
  auto d = make_count_result(N, "enumeration", mode);
  const int offset = N == 0 ? 0 : 1;
  if (mode == Arithmetic::rational) {
    std::vector<Rational> mass(d.size());
    Rational total = 0;
    for (const auto& eta : states) {
      const Rational w = weight_exact(eta, a);
      mass[eta.group_count() - offset] += w;
      total += w;
    }
    d.exact.resize(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
      d.exact[i] = mass[i] / total;
      d.probability[i] = to_double(d.exact[i]);
    }
    d.log_normalizer = log_of(total);
    return d;
  }
  std::vector<std::vector<double>> logs(d.size());
  for (const auto& eta : states) logs[eta.group_count() - offset].push_back(log_weight(eta, a));
  std::vector<double> per_n(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) per_n[i] = log_sum_exp(logs[i]);
  d.log_normalizer = log_sum_exp(per_n);
  for (std::size_t i = 0; i < d.size(); ++i) d.probability[i] = std::exp(per_n[i] - d.log_normalizer);
  d.error_bound = 4 * static_cast<double>(states.size()) * DBL_EPSILON;
  return d;
}

GroupCountDistribution counts_by_rational_dp(int N, const ParameterFunction& a) {
  const auto w = exact_mass_weights(N, a);
  // rows[m][n] = c_{m,n}, n = 0..m
  std::vector<std::vector<Rational>> rows(static_cast<std::size_t>(N) + 1);
  rows[0] = {Rational(1)};
  for (int m = 1; m <= N; ++m) {
    auto& row = rows[m];
    row.assign(static_cast<std::size_t>(m) + 1, Rational(0));
    for (int k = 1; k <= m; ++k) {
      if (sgn(w[k]) == 0) continue;
      const auto& prev = rows[m - k];
      for (int n = 1; n <= m - k + 1; ++n) {
        if (sgn(prev[n - 1]) != 0) row[n] += w[k] * prev[n - 1];
      }
    }
    for (auto& v : row) v /= m;
  }
  auto d = make_count_result(N, "coefficient_dp", Arithmetic::rational);
  Rational total = 0;
  for (int n = 1; n <= N; ++n) total += rows[N][n];
  if (sgn(total) == 0) throw ModelError("c_N vanishes for this parameter table");
  d.exact.resize(d.size());
  for (int n = 1; n <= N; ++n) {
    d.exact[n - 1] = rows[N][n] / total;
    d.probability[n - 1] = to_double(d.exact[n - 1]);
  }
  d.log_normalizer = log_of(total);
  return d;
}

// Tilted mass weights log(k a_k t^k) with t = e^{-sigma}; the tilt keeps
// intermediate coefficient rows near unit scale and cancels in the ratio.
std::vector<double> tilted_log_weights(int N, const ParameterFunction& a, double sigma) {
  auto lw = log_mass_weights(N, a);
  for (int k = 1; k <= N; ++k) lw[k] -= k * sigma;
  return lw;
}

GroupCountDistribution counts_by_float_dp(int N, const ParameterFunction& a) {
  const double sigma = static_cast<double>(saddle_point(N, a));
  const auto lw = tilted_log_weights(N, a, sigma);
  // rows[m][n] * exp(scale[m]) = c_{m,n} t^m
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(N) + 1);
  std::vector<double> scale(static_cast<std::size_t>(N) + 1, 0.0);
  rows[0] = {1.0};
  std::vector<double> factor(static_cast<std::size_t>(N) + 1);
  for (int m = 1; m <= N; ++m) {
    double top = kNegInf;
    for (int k = 1; k <= m; ++k) {
      factor[k] = lw[k] + scale[m - k];
      top = std::max(top, factor[k]);
    }
    auto& row = rows[m];
    row.assign(static_cast<std::size_t>(m) + 1, 0.0);
    if (top == kNegInf) {
      scale[m] = kNegInf;
      continue;
    }
    for (int k = 1; k <= m; ++k) {
      const double f = std::exp(factor[k] - top);
      if (f == 0.0) continue;
      const double* prev = rows[m - k].data();
      double* out = row.data() + 1;
      const int len = m - k + 1;
      for (int i = 0; i < len; ++i) out[i] += f * prev[i];
    }
    const double peak = *std::max_element(row.begin(), row.end());
    if (peak > 0) {
      for (auto& v : row) v /= peak;
      scale[m] = top + std::log(peak) - std::log(static_cast<double>(m));
    } else {
      scale[m] = kNegInf;
    }
  }
  auto d = make_count_result(N, "coefficient_dp", Arithmetic::floating);
  CompensatedSum<double> total;
  for (int n = 1; n <= N; ++n) total += rows[N][n];
  if (!(total.value() > 0) || scale[N] == kNegInf) throw ModelError("c_N vanishes for this parameter table");
  for (int n = 1; n <= N; ++n) d.probability[n - 1] = rows[N][n] / total.value();
  d.log_normalizer = scale[N] + std::log(total.value()) + N * sigma;
  d.error_bound = 4.0 * N * DBL_EPSILON;
  return d;
}

GroupCountDistribution counts_by_root_of_unity(int N, const ParameterFunction& a, int threads) {
  const double sigma = static_cast<double>(saddle_point(N, a));
  const auto lw = tilted_log_weights(N, a, sigma);
  // L[m] = log of c_m(1) t^m, the u = 1 value used to renormalize every step
  std::vector<double> L(static_cast<std::size_t>(N) + 1, kNegInf);
  L[0] = 0.0;
  {
    std::vector<double> terms;
    for (int m = 1; m <= N; ++m) {
      terms.resize(static_cast<std::size_t>(m));
      for (int k = 1; k <= m; ++k) terms[k - 1] = lw[k] + L[m - k];
      L[m] = log_sum_exp(terms) - std::log(static_cast<double>(m));
    }
  }
  if (L[N] == kNegInf) throw ModelError("c_N vanishes for this parameter table");

  std::size_t M = 1;
  while (M <= static_cast<std::size_t>(N)) M <<= 1;
  const std::size_t half = M / 2;  // points j = 0..half, the rest by conjugation
  std::vector<double> cos_table(M), sin_table(M);
  for (std::size_t j = 0; j < M; ++j) {
    const double angle = 2 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(M);
    cos_table[j] = std::cos(angle);
    sin_table[j] = std::sin(angle);
  }

  // r_m(u) = c_m(u) / c_m(1) obeys r_m(u) = u sum_k beta_{m,k} r_{m-k}(u)
  // with beta_{m,k} >= 0 summing to one, so |r_m(u)| <= 1 throughout.
  constexpr std::size_t kBlock = 64;
  const std::size_t points = half + 1;
  const std::size_t blocks = (points + kBlock - 1) / kBlock;
  std::vector<double> final_re(points), final_im(points);

  parallel_for(blocks, threads, [&](std::size_t b) {
    const std::size_t j0 = b * kBlock;
    const std::size_t width = std::min(kBlock, points - j0);
    std::vector<double> re((static_cast<std::size_t>(N) + 1) * kBlock, 0.0);
    std::vector<double> im((static_cast<std::size_t>(N) + 1) * kBlock, 0.0);
    for (std::size_t i = 0; i < width; ++i) re[i] = 1.0;
    std::vector<double> beta(static_cast<std::size_t>(N) + 1);
    double acc_re[kBlock], acc_im[kBlock];
    for (int m = 1; m <= N; ++m) {
      const double shift = L[m] + std::log(static_cast<double>(m));
      for (int k = 1; k <= m; ++k) beta[k] = L[m] == kNegInf ? 0.0 : std::exp(lw[k] + L[m - k] - shift);
      std::fill(acc_re, acc_re + kBlock, 0.0);
      std::fill(acc_im, acc_im + kBlock, 0.0);
      for (int k = 1; k <= m; ++k) {
        const double bk = beta[k];
        if (bk == 0.0) continue;
        const double* pr = &re[static_cast<std::size_t>(m - k) * kBlock];
        const double* pi = &im[static_cast<std::size_t>(m - k) * kBlock];
        for (std::size_t i = 0; i < kBlock; ++i) {
          acc_re[i] += bk * pr[i];
          acc_im[i] += bk * pi[i];
        }
      }
      double* outr = &re[static_cast<std::size_t>(m) * kBlock];
      double* outi = &im[static_cast<std::size_t>(m) * kBlock];
      for (std::size_t i = 0; i < width; ++i) {
        const double c = cos_table[j0 + i], s = sin_table[j0 + i];
        outr[i] = c * acc_re[i] - s * acc_im[i];
        outi[i] = s * acc_re[i] + c * acc_im[i];
      }
    }
    for (std::size_t i = 0; i < width; ++i) {
      final_re[j0 + i] = re[static_cast<std::size_t>(N) * kBlock + i];
      final_im[j0 + i] = im[static_cast<std::size_t>(N) * kBlock + i];
    }
  });

  // Inverse transform: P(n) = (1/M) sum_j r_N(u_j) u_j^{-n}, using
  // r_N(conj u) = conj r_N(u). Fixed summation order for determinism.
  auto coefficient = [&](std::size_t n) {
    CompensatedSum<double> s;
    s += final_re[0];
    s += ((n & 1) ? -1.0 : 1.0) * final_re[half];
    for (std::size_t j = 1; j < half; ++j) {
      const std::size_t idx = (j * n) % M;
      s += 2.0 * (final_re[j] * cos_table[idx] + final_im[j] * sin_table[idx]);
    }
    return s.value() / static_cast<double>(M);
  };

  auto d = make_count_result(N, "root_of_unity", Arithmetic::floating);
  std::vector<double> coef(M);
  parallel_for(M, threads, [&](std::size_t n) { coef[n] = coefficient(n); });
  double spurious = std::abs(coef[0]);
  for (std::size_t n = static_cast<std::size_t>(N) + 1; n < M; ++n) spurious = std::max(spurious, std::abs(coef[n]));
  d.error_bound = std::max(spurious, 4.0 * N * DBL_EPSILON);
  // negative values are rounding noise below the error bound
  for (int n = 1; n <= N; ++n) d.probability[n - 1] = std::max(coef[n], 0.0);
  d.log_normalizer = L[N] + N * sigma;
  return d;
}

}  // namespace

const char* to_string(CountMethod method) {
  switch (method) {
    case CountMethod::automatic: return "auto";
    case CountMethod::enumeration: return "enumeration";
    case CountMethod::coefficient_dp: return "coefficient_dp";
    case CountMethod::root_of_unity: return "root_of_unity";
  }
  return "?";
}

Rational weight_exact(const Partition& eta, const ParameterFunction& a) {
  Rational w = 1;
  for (const auto& [size, count] : eta.blocks()) {
    w *= power(a.exact(size), static_cast<unsigned>(count)) / factorial(static_cast<unsigned>(count));
  }
  return w;
}

double log_weight(const Partition& eta, const ParameterFunction& a) {
  double w = 0;
  for (const auto& [size, count] : eta.blocks()) {
    w += count * a.log_value(size) - std::lgamma(count + 1.0);
  }
  return w;
}

std::vector<Rational> partition_function_exact(int N, const ParameterFunction& a) {
  check_N(N);
  require_exact(a);
  a.require_positive_through(N);
  const auto w = exact_mass_weights(N, a);
  std::vector<Rational> c(static_cast<std::size_t>(N) + 1);
  c[0] = 1;
  for (int m = 1; m <= N; ++m) {
    Rational s = 0;
    for (int k = 1; k <= m; ++k) s += w[k] * c[m - k];
    c[m] = s / m;
  }
  return c;
}

Rational partition_function_enumerated(int N, const ParameterFunction& a, int guard) {
  check_N(N);
  require_exact(a);
  a.require_positive_through(N);
  Rational total = 0;
  for (const auto& eta : enumerate_partitions(N, guard)) total += weight_exact(eta, a);
  return total;
}

std::vector<double> log_partition_function(int N, const ParameterFunction& a) {
  check_N(N);
  a.require_positive_through(N);
  const auto lw = log_mass_weights(N, a);
  std::vector<double> L(static_cast<std::size_t>(N) + 1, kNegInf);
  L[0] = 0.0;
  std::vector<double> terms;
  for (int m = 1; m <= N; ++m) {
    terms.resize(static_cast<std::size_t>(m));
    for (int k = 1; k <= m; ++k) terms[k - 1] = lw[k] + L[m - k];
    L[m] = log_sum_exp(terms) - std::log(static_cast<double>(m));
  }
  return L;
}

double log_partition_function_enumerated(int N, const ParameterFunction& a, int guard) {
  check_N(N);
  a.require_positive_through(N);
  std::vector<double> logs;
  for (const auto& eta : enumerate_partitions(N, guard)) logs.push_back(log_weight(eta, a));
  return log_sum_exp(logs);
}

Rational measure_probability_exact(const Partition& eta, const ParameterFunction& a) {
  const auto c = partition_function_exact(eta.total(), a);
  return weight_exact(eta, a) / c.back();
}

double measure_probability(const Partition& eta, const ParameterFunction& a) {
  const auto L = log_partition_function(eta.total(), a);
  return std::exp(log_weight(eta, a) - L.back());
}

WeightedDistribution<Partition> invariant_measure(int N, const ParameterFunction& a, Arithmetic mode,
                                                  int guard) {
  check_N(N);
  a.require_positive_through(N);
  WeightedDistribution<Partition> d;
  d.support = enumerate_partitions(N, guard);
  d.mode = mode;
  d.method = "enumeration";
  d.probability.resize(d.size());
  if (mode == Arithmetic::rational) {
    require_exact(a);
    d.exact.resize(d.size());
    Rational total = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      d.exact[i] = weight_exact(d.support[i], a);
      total += d.exact[i];
    }
    for (std::size_t i = 0; i < d.size(); ++i) {
      d.exact[i] /= total;
      d.probability[i] = to_double(d.exact[i]);
    }
    d.log_normalizer = log_of(total);
    return d;
  }
  std::vector<double> logs(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) logs[i] = log_weight(d.support[i], a);
  d.log_normalizer = log_sum_exp(logs);
  for (std::size_t i = 0; i < d.size(); ++i) d.probability[i] = std::exp(logs[i] - d.log_normalizer);
  d.error_bound = 4 * static_cast<double>(d.size()) * DBL_EPSILON;
  return d;
}

GroupCountDistribution group_count_distribution(int N, const ParameterFunction& a, CountOptions options) {
  if (N < 1) throw ConfigError("the group-count law needs N >= 1");
  a.require_positive_through(N);
  if (options.mode == Arithmetic::rational) require_exact(a);

  CountMethod method = options.method;
  if (method == CountMethod::automatic) {
    if (options.mode == Arithmetic::rational || N <= options.coefficient_guard) {
      method = CountMethod::coefficient_dp;
    } else {
      method = CountMethod::root_of_unity;
    }
  }

  switch (method) {
    case CountMethod::enumeration:
      return counts_by_enumeration(N, a, options.mode, options.enumeration_guard);
    case CountMethod::coefficient_dp:
      if (options.mode == Arithmetic::rational) {
        if (N > options.rational_guard) {
          throw SizeGuardError("rational coefficient DP limited to N <= " +
                               std::to_string(options.rational_guard));
        }
        return counts_by_rational_dp(N, a);
      }
      if (N > options.coefficient_guard) {
        throw SizeGuardError("coefficient DP limited to N <= " + std::to_string(options.coefficient_guard) +
                             "; use root_of_unity");
      }
      return counts_by_float_dp(N, a);
    case CountMethod::root_of_unity:
      if (options.mode == Arithmetic::rational) {
        throw ConfigError("root-of-unity extraction is floating point only");
      }
      return counts_by_root_of_unity(N, a, options.threads);
    case CountMethod::automatic:
      break;
  }
  throw std::logic_error("unhandled count method");
}

double mean_group_count(int N, const ParameterFunction& a, const std::vector<double>& log_c) {
  if (N < 1) throw ConfigError("mean group count needs N >= 1");
  if (static_cast<int>(log_c.size()) < N + 1) throw ConfigError("log c table too short");
  CompensatedSum<double> s;
  for (int k = N; k >= 1; --k) {
    const double la = a.log_value(k);
    if (la == kNegInf || log_c[N - k] == kNegInf) continue;
    s += std::exp(la + log_c[N - k] - log_c[N]);
  }
  return s.value();
}

double mean_group_count(int N, const ParameterFunction& a) {
  return mean_group_count(N, a, log_partition_function(N, a));
}

Rational mean_group_count_exact(int N, const ParameterFunction& a) {
  if (N < 1) throw ConfigError("mean group count needs N >= 1");
  const auto c = partition_function_exact(N, a);
  Rational s = 0;
  for (int k = 1; k <= N; ++k) s += a.exact(k) * c[N - k];
  return s / c[N];
}

long double saddle_point(int N, const ParameterFunction& a) {
  if (N < 1) throw ConfigError("saddle point needs N >= 1");
  a.require_positive_through(N);
  std::vector<long double> lw(static_cast<std::size_t>(N) + 1);
  bool any = false;
  for (int k = 1; k <= N; ++k) {
    lw[k] = std::log(static_cast<long double>(k)) + static_cast<long double>(a.log_value(k));
    any = any || std::isfinite(lw[k]);
  }
  if (!any) throw ModelError("all weights vanish");
  const long double logN = std::log(static_cast<long double>(N));
  // f(sigma) = log sum_k k a_k e^{-k sigma} - log N, strictly decreasing;
  // f' = -(mean size under the tilted size law).
  auto fdf = [&](long double s) {
    long double top = -std::numeric_limits<long double>::infinity();
    for (int k = 1; k <= N; ++k) {
      if (std::isfinite(lw[k])) top = std::max(top, lw[k] - k * s);
    }
    CompensatedSum<long double> z, zk;
    for (int k = 1; k <= N; ++k) {
      if (!std::isfinite(lw[k])) continue;
      const long double e = std::exp(lw[k] - k * s - top);
      z += e;
      zk += k * e;
    }
    return std::pair<long double, long double>{top + std::log(z.value()) - logN, -zk.value() / z.value()};
  };
  long double guess = 0;
  if (a.is_power_kind()) {
    guess = std::pow(static_cast<long double>(N) / (a.q() * std::tgamma(a.p() + 1)), -1.0L / (a.p() + 1)) +
            static_cast<long double>(a.log_h());
  }
  long double width = std::max(1.0L, std::abs(guess));
  long double lo = guess - width, hi = guess + width;
  for (int i = 0; i < 200 && fdf(lo).first <= 0; ++i) lo -= (width *= 2);
  width = std::max(1.0L, std::abs(guess));
  for (int i = 0; i < 200 && fdf(hi).first >= 0; ++i) hi += (width *= 2);
  const long double tol = 1e-16L * std::max(std::abs(guess), 1e-6L);
  const auto r = safeguarded_newton<long double>(fdf, lo, hi, tol);
  return r.root;
}

}  // namespace cfp
