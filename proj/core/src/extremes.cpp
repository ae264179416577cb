#include "cfp/extremes.hpp"

#include "cfp/error.hpp"
#include "cfp/measure.hpp"

#include <cmath>

namespace cfp {

LargestWindow largest_group_window(int N, double p, double eps) {
  if (N < 1) throw ConfigError("window needs N >= 1");
  const double e = 1 / (p + 1);
  return {std::pow(static_cast<double>(N), e - eps), std::pow(static_cast<double>(N), e + eps)};
}

ExtremeStatistics extreme_group_statistics(const std::vector<Partition>& samples, double p, double eps, int l) {
  if (samples.empty()) throw ConfigError("no samples");
  ExtremeStatistics st;
  st.samples = samples.size();
  st.l = l;
  const int N = samples.front().total();
  st.window = largest_group_window(N, p, eps);
  std::size_t inside = 0, above = 0;
  for (const auto& eta : samples) {
    if (eta.total() != N) throw ConfigError("samples have different totals");
    const int big = eta.largest(), small = eta.smallest();
    st.largest_law[big] += 1;
    st.smallest_law[small] += 1;
    if (big > st.window.lower && big < st.window.upper) ++inside;
    if (small >= l) ++above;
  }
  const double n = static_cast<double>(samples.size());
  for (auto& [k, v] : st.largest_law) v /= n;
  for (auto& [k, v] : st.smallest_law) v /= n;
  st.window_coverage = inside / n;
  st.smallest_at_least = above / n;
  st.window_coverage_se = std::sqrt(st.window_coverage * (1 - st.window_coverage) / n);
  st.smallest_at_least_se = std::sqrt(st.smallest_at_least * (1 - st.smallest_at_least) / n);
  return st;
}

Rational exact_smallest_at_least(int N, const ParameterFunction& a, int l) {
  if (N < 1) throw ConfigError("N must be >= 1");
  if (l <= 1) return 1;
  if (l > N) return 0;
  const auto full = partition_function_exact(N, a);
  const auto cut = partition_function_exact(N, a.restricted(N, l, N));
  return cut[N] / full[N];
}

double smallest_at_least_probability(int N, const ParameterFunction& a, int l) {
  if (N < 1) throw ConfigError("N must be >= 1");
  if (l <= 1) return 1;
  if (l > N) return 0;
  const double full = log_partition_function(N, a)[N];
  const double cut = log_partition_function(N, a.restricted(N, l, N))[N];
  return std::exp(cut - full);
}

double largest_at_most_probability(int N, const ParameterFunction& a, int m) {
  if (N < 1) throw ConfigError("N must be >= 1");
  if (m >= N) return 1;
  if (m < 1) return 0;
  const double full = log_partition_function(N, a)[N];
  const double cut = log_partition_function(N, a.restricted(N, 1, m))[N];
  return std::exp(cut - full);
}

double largest_window_probability(int N, const ParameterFunction& a, const LargestWindow& w) {
  // largest < upper  <=>  largest <= ceil(upper) - 1
  const int below_upper = static_cast<int>(std::ceil(w.upper)) - 1;
  const int at_most_lower = static_cast<int>(std::floor(w.lower));
  return largest_at_most_probability(N, a, below_upper) - largest_at_most_probability(N, a, at_most_lower);
}

}  // namespace cfp
