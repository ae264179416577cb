#include "cfp/error.hpp"
#include "cfp/extremes.hpp"
#include "cfp/sampler.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace cfp;

TEST(Extremes, SmallestPartMatchesBruteForce) {
  for (const char* spec : {"power:p=1,q=1", "power:p=2,q=1"}) {
    const auto a = ParameterFunction::parse(spec);
    auto w = [&](int k) { return a.exact(k); };
    for (int N : {1, 5, 14}) {
      for (int l : {1, 2, 3}) {
        const auto want = oracle::measure_of(N, w, [&](const std::vector<int>& parts) { return parts.back() >= l; });
        EXPECT_EQ(exact_smallest_at_least(N, a, l), want) << spec << " N=" << N << " l=" << l;
        EXPECT_NEAR(smallest_at_least_probability(N, a, l), want.get_d(), 1e-14);
      }
    }
  }
}

TEST(Extremes, LargestPartMatchesBruteForce) {
  const auto a = ParameterFunction::parse("power:p=2,q=1");
  auto w = [&](int k) { return a.exact(k); };
  for (int m : {1, 3, 7, 14}) {
    const auto want = oracle::measure_of(14, w, [&](const std::vector<int>& parts) { return parts.front() <= m; });
    EXPECT_NEAR(largest_at_most_probability(14, a, m), want.get_d(), 1e-14) << m;
  }
}

TEST(Extremes, SmallestAtLeastTwoApproachesInverseE) {
  const auto a = ParameterFunction::power(1.0, 1.0);
  double prev = 1;
  for (int N : {20, 40, 80, 160}) {
    const double gap = std::abs(smallest_at_least_probability(N, a, 2) - std::exp(-1.0));
    EXPECT_LT(gap, prev);
    prev = gap;
  }
}

TEST(Extremes, WindowAndSampleStatistics) {
  const auto w = largest_group_window(10000, 1.0, 0.2);
  EXPECT_NEAR(w.lower, std::pow(10000.0, 0.3), 1e-9);
  EXPECT_NEAR(w.upper, std::pow(10000.0, 0.7), 1e-9);
  const auto a = ParameterFunction::power(1.0, 1.0);
  const int N = 200;
  const auto draws = sample_many(TiltedPoissonSpec(a, N, optimal_tilt(N, a)), 20000, 5);
  const auto stats = extreme_group_statistics(draws, 1.0, 0.2, 2);
  const auto win = largest_group_window(N, 1.0, 0.2);
  EXPECT_NEAR(stats.window_coverage, largest_window_probability(N, a, win), 4 * stats.window_coverage_se + 1e-3);
  EXPECT_NEAR(stats.smallest_at_least, smallest_at_least_probability(N, a, 2), 4 * stats.smallest_at_least_se + 1e-3);
  double total = 0;
  for (const auto& [size, prob] : stats.largest_law) total += prob;
  EXPECT_NEAR(total, 1, 1e-12);
  EXPECT_THROW(extreme_group_statistics({}, 1.0, 0.2, 2), ConfigError);
}
