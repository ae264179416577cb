#ifndef CFP_EXTREMES_HPP
#define CFP_EXTREMES_HPP

#include "cfp/parameter_function.hpp"
#include "cfp/partition.hpp"
#include "cfp/rational.hpp"

#include <map>
#include <vector>

namespace cfp {

/// Open window (N^{1/(p+1)-eps}, N^{1/(p+1)+eps}) for the largest group.
struct LargestWindow {
  double lower, upper;
};
LargestWindow largest_group_window(int N, double p, double eps);

struct ExtremeStatistics {
  std::size_t samples = 0;
  /// empirical laws of the largest and smallest part
  std::map<int, double> largest_law, smallest_law;
  LargestWindow window{};
  double window_coverage = 0;     // P(lower < largest < upper)
  int l = 2;
  double smallest_at_least = 0;   // P(smallest >= l)
  /// binomial standard errors of the two proportions
  double window_coverage_se = 0, smallest_at_least_se = 0;
};

/// Empirical extreme-part statistics of equilibrium samples of total N.
ExtremeStatistics extreme_group_statistics(const std::vector<Partition>& samples, double p, double eps, int l);

/// P(smallest part >= l) = c_N[a restricted to k >= l] / c_N, exactly.
Rational exact_smallest_at_least(int N, const ParameterFunction& a, int l);
/// Same in log-domain floating point (any N the recursion reaches).
double smallest_at_least_probability(int N, const ParameterFunction& a, int l);

/// P(largest part <= m).
double largest_at_most_probability(int N, const ParameterFunction& a, int m);

/// P(lower < largest < upper) from two restricted partition functions.
double largest_window_probability(int N, const ParameterFunction& a, const LargestWindow& w);

}  // namespace cfp

#endif  // CFP_EXTREMES_HPP
