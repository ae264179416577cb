#ifndef CFP_NUMERIC_HPP
#define CFP_NUMERIC_HPP

#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace cfp {

/// Neumaier-compensated running sum. Summation order is the call order, so
/// results are reproducible for a fixed input sequence.
template <class T>
class CompensatedSum {
 public:
  void add(T x) {
    const T t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  CompensatedSum& operator+=(T x) {
    add(x);
    return *this;
  }
  T value() const { return sum_ + carry_; }

 private:
  T sum_ = 0;
  T carry_ = 0;
};

/// log(sum_i exp(x_i)); -inf for an empty input or all -inf entries.
double log_sum_exp(std::span<const double> x);

/// log(exp(a) + exp(b)) without overflow.
inline double log_add_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

/// Root of a strictly monotone function on [lo, hi] where f(lo) and f(hi)
/// have opposite signs. Safeguarded Newton: bisection whenever the Newton
/// step leaves the bracket. `fdf` returns {f(x), f'(x)}.
template <class T>
struct RootResult {
  T root;
  T residual;
  int iterations;
};

template <class T>
RootResult<T> safeguarded_newton(const std::function<std::pair<T, T>(T)>& fdf, T lo, T hi,
                                 T abs_tol, int max_iter = 400) {
  auto [flo, dlo] = fdf(lo);
  (void)dlo;
  const bool increasing = flo < 0;
  T x = lo + (hi - lo) / 2;
  T fx = 0;
  int it = 0;
  for (; it < max_iter; ++it) {
    auto [f, df] = fdf(x);
    fx = f;
    if (f == 0) break;
    if ((f < 0) == increasing) {
      lo = x;
    } else {
      hi = x;
    }
    T next = (df != 0) ? x - f / df : lo + (hi - lo) / 2;
    if (!(next > lo && next < hi)) next = lo + (hi - lo) / 2;
    const T step = std::abs(next - x);
    x = next;
    if (step <= abs_tol || hi - lo <= abs_tol) {
      fx = fdf(x).first;
      ++it;
      break;
    }
  }
  return {x, fx, it};
}

/// Regularised lower incomplete gamma complement: P(chi2_dof > stat).
double chi_square_survival(double statistic, double dof);

/// Standard normal CDF.
inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

/// Least-squares slope of y against x.
double fitted_slope(std::span<const double> x, std::span<const double> y);

}  // namespace cfp

#endif  // CFP_NUMERIC_HPP
