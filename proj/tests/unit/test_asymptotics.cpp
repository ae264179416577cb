#include "cfp/asymptotics.hpp"
#include "cfp/error.hpp"
#include "cfp/measure.hpp"
#include "cfp/poisson_summation.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace cfp;
using cl = std::complex<long double>;

namespace {

double rel(cl a, cl b) { return static_cast<double>(std::abs(a - b) / std::abs(b)); }

const long double kGridRe[] = {0.1L, 0.01L, 0.001L};
const long double kGridIm[] = {0.0L, 0.5L, 3.0L};

}  // namespace

TEST(PoissonSummation, ClosedFormsOnBothRoutes) {
  for (auto re : kGridRe) {
    for (auto im : kGridIm) {
      const cl z(re, im);
      for (auto route : {SeriesRoute::poisson, SeriesRoute::direct, SeriesRoute::automatic}) {
        EXPECT_LT(rel(power_exp_series(z, 1, 1e-16L, route).value, oracle::geometric_series(z)), 1e-12);
        EXPECT_LT(rel(power_exp_series(z, 2, 1e-16L, route).value, oracle::linear_series(z)), 1e-12);
      }
    }
  }
}

TEST(PoissonSummation, RealExample) {
  const auto v = power_exp_series(0.1L, 2);
  EXPECT_NEAR(static_cast<double>(v.value.real()), 99.9167083, 1e-6);
  EXPECT_EQ(v.value.imag(), 0);
  EXPECT_EQ(v.route, SeriesRoute::poisson);
}

TEST(PoissonSummation, RoutesAgreeOnGrid) {
  for (long double p : {1.5L, 2.0L, 2.5L, 3.0L}) {
    for (auto re : kGridRe) {
      for (auto im : kGridIm) {
        const cl z(re, im);
        const auto a = power_exp_series(z, p, 1e-16L, SeriesRoute::poisson);
        const auto b = power_exp_series(z, p, 1e-16L, SeriesRoute::direct);
        EXPECT_LT(rel(a.value, b.value), 1e-12) << "p=" << static_cast<double>(p) << " z=" << static_cast<double>(re)
                                                << "+" << static_cast<double>(im) << "i";
        EXPECT_LT(a.error_estimate, 1e-12);
      }
    }
  }
}

TEST(PoissonSummation, TruncationIsStableUnderTenfoldCutoff) {
  for (long double p : {1.5L, 3.0L}) {
    const cl z(0.01L, 0.5L);
    const auto base = power_exp_series(z, p, 1e-16L, SeriesRoute::poisson);
    const auto wide = power_exp_series(z, p, 1e-16L, SeriesRoute::poisson, 10 * base.terms);
    EXPECT_LT(rel(base.value, wide.value), 1e-14);
  }
}

TEST(PoissonSummation, ConjugateSymmetry) {
  for (long double p : {0.5L, 1.0L, 2.5L}) {
    const cl z(0.05L, 1.3L);
    const auto a = power_exp_series(z, p).value;
    const auto b = power_exp_series(std::conj(z), p).value;
    EXPECT_LT(rel(std::conj(a), b), 1e-14);
  }
}

TEST(PoissonSummation, SmallExponentUsesDirectSum) {
  const auto v = power_exp_series(cl(0.2L, 0.1L), 0.5L);
  EXPECT_EQ(v.route, SeriesRoute::direct);
  long double s = 0;
  for (int k = 1; k < 20000; ++k) s += std::pow(static_cast<long double>(k), -0.5L) * std::exp(-0.2L * k);
  EXPECT_NEAR(static_cast<double>(power_exp_sum(0.2L, 0.5L)), static_cast<double>(s), 1e-12);
}

TEST(PoissonSummation, RejectsNonPositiveRealPart) {
  EXPECT_THROW(power_exp_series(cl(0, 1), 2), ConfigError);
  EXPECT_THROW(power_exp_series(cl(-0.1L, 0), 2), ConfigError);
  EXPECT_THROW(power_exp_series(cl(0.1L, 0), 0.5L, 1e-16L, SeriesRoute::poisson), ConfigError);
}

TEST(ConstantA, KnownValues) {
  EXPECT_NEAR(constant_A(2), -1.0 / 12, 1e-14);
  EXPECT_NEAR(constant_A(3), 0, 1e-14);
  EXPECT_NEAR(constant_A_limit(1), -0.5, 1e-6);
  EXPECT_NEAR(constant_A(1), -0.5, 1e-6);
  EXPECT_NEAR(constant_A(4), 2 * std::pow(2 * std::numbers::pi, -4) * std::pow(std::numbers::pi, 4) / 90, 1e-14);
}

TEST(ConstantA, LimitPathReproducesClosedForm) {
  for (double p : {1.5, 2.0, 3.0}) EXPECT_NEAR(constant_A_limit(p), constant_A_closed(p), 1e-8) << p;
}

TEST(ConstantA, SmallExponentLimitMatchesHurwitzValue) {
  // For 0 < p < 1 the constant is zeta(1 - p) / Gamma(p) by the Mellin expansion.
  const double p = 0.5;
  const double zeta_half = -1.4603545088095868;
  EXPECT_NEAR(constant_A_limit(p), zeta_half / std::tgamma(p), 1e-6);
}

TEST(Profile, ConstantsFollowTheirDefinitions) {
  for (double p : {0.5, 1.0, 2.0, 3.5}) {
    for (double q : {1.0, 4.0}) {
      const auto pr = AsymptoticProfile::make(p, q);
      const double Q = std::pow(std::tgamma(p + 1), 1 / (p + 1)) / p;
      EXPECT_NEAR(pr.Q_p, Q, 1e-14);
      EXPECT_NEAR(pr.d_p, Q / (p + 1), 1e-14);
      EXPECT_NEAR(pr.Q_tilde, std::pow(q, 1 / (p + 1)) * Q, 1e-13);
      EXPECT_NEAR(pr.d_tilde, std::pow(q, 1 / (p + 1)) * Q / (p + 1), 1e-13);
      EXPECT_NEAR(pr.h2, (p + 1) * Q, 1e-13);
      EXPECT_NEAR(pr.h3, std::tgamma(p) * pr.A_p, 1e-12);
      EXPECT_NEAR(pr.A_p1, constant_A(p + 1), 1e-14);
    }
  }
  const auto one = AsymptoticProfile::make(1, 1);
  EXPECT_NEAR(one.h1, 1 / (2 * std::sqrt(std::numbers::pi)), 1e-15);
  EXPECT_NEAR(one.h2, 2, 1e-15);
  EXPECT_NEAR(one.h3, -0.5, 1e-6);
}

TEST(Profile, CenterAndScale) {
  const auto pr = AsymptoticProfile::make(1, 1);
  EXPECT_NEAR(pr.center(10000), 100, 1e-12);
  EXPECT_NEAR(pr.scale(10000), 10 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(clt_standardize(100, 10000, pr), 0, 1e-12);
  EXPECT_NEAR(AsymptoticProfile::make(1, 4).center(10000), 200, 1e-10);
  for (double s : {-2.0, 0.3, 1.7}) EXPECT_NEAR(pr.s_of_n(pr.n_of_s(s, 900), 900), s, 1e-12);
}

TEST(Expansions, DeltaExample) {
  const auto pr = AsymptoticProfile::make(1, 1);
  EXPECT_NEAR(static_cast<double>(delta_expansion(100, pr)), 0.01005, 1e-9);
  EXPECT_NEAR(static_cast<double>(delta_expansion(1e6, pr, ExpansionOrder::leading)) * 1e6, 1, 1e-12);
}

TEST(Expansions, SigmaExample) {
  const double s = static_cast<double>(solve_sigma(100, 1.0));
  EXPECT_NEAR(s, 0.0999344, 2e-7);
  for (double p : {1.0, 2.0}) {
    const auto pr = AsymptoticProfile::make(p, 1);
    const double N = 1e6;
    const double lead = std::pow(N / std::tgamma(p + 1), -1 / (p + 1));
    EXPECT_NEAR(static_cast<double>(solve_sigma(1000000, p)) / lead, 1, 1e-3);
    EXPECT_NEAR(sigma_expansion(N, pr, ExpansionOrder::leading), lead, 1e-15);
    EXPECT_NEAR(sigma_expansion(N, pr) / static_cast<double>(solve_sigma(1000000, p)), 1, 1e-6);
  }
}

TEST(Expansions, SigmaTailIsNegligible) {
  double prev = INFINITY;
  for (int N : {100, 1000, 10000}) {
    const double s = static_cast<double>(solve_sigma(N, 1.0));
    const double tail = sigma_tail(N, s, 1.0) / N;
    EXPECT_LT(tail, prev);
    prev = tail;
  }
  EXPECT_LT(prev, 1e-30);
}

TEST(Expansions, BNSquared) {
  EXPECT_NEAR(B_N_squared(1, 0.4, 1.0), std::exp(-0.4), 1e-15);
  const double s = static_cast<double>(solve_sigma(10000, 1.0));
  EXPECT_NEAR(B_N_squared(10000, s, 1.0) / B_N_squared_asymptote(10000, 1.0), 1, 0.05);
  EXPECT_LT(B_N_squared(50, 0.1, 2.0), B_N_squared(51, 0.1, 2.0));
}

TEST(Expansions, PartitionFunctionAsymptotics) {
  const auto pr = AsymptoticProfile::make(1, 1);
  const auto logc = log_partition_function(4000, ParameterFunction::power(1.0, 1.0));
  EXPECT_NEAR(logc[1000] - log_cN_closed(1000, pr), 0, std::log(1.1));
  EXPECT_LT(std::abs(logc[4000] - log_cN_closed(4000, pr)), std::abs(logc[1000] - log_cN_closed(1000, pr)));
  for (double p : {1.0, 2.0}) {
    const auto prp = AsymptoticProfile::make(p, 1);
    const auto lc = log_partition_function(4000, ParameterFunction::power(1.0, p));
    double prev = INFINITY;
    for (int N : {250, 500, 1000, 2000, 4000}) {
      const double gap = std::abs(lc[N] - log_cN_closed(N, prp));
      EXPECT_LT(gap, prev) << "p=" << p << " N=" << N;
      prev = gap;
      EXPECT_NEAR(log_cN_saddle(N, p), log_cN_closed(N, prp), 0.05);
    }
  }
  EXPECT_THROW(log_cN_closed(100, AsymptoticProfile::make(1, 2)), ModelError);
}

TEST(Expansions, SaddleFormTracksGeneralQ) {
  const auto lc = log_partition_function(3000, ParameterFunction::power(3.0, 1.0));
  EXPECT_NEAR(lc[3000], log_cN_saddle(3000, 1.0, 3.0), 0.01);
}

TEST(LocalLimit, DensityExamples) {
  const auto pr = AsymptoticProfile::make(1, 1);
  EXPECT_NEAR(local_limit_density(10000, 0, pr), 1 / (10 * std::sqrt(std::numbers::pi)), 1e-12);
  EXPECT_DOUBLE_EQ(local_limit_density(500, 1.3, pr), local_limit_density(500, -1.3, pr));
  double total = 0;
  for (int n = 1; n <= 10000; ++n) total += local_limit_density(10000, pr.s_of_n(n, 10000), pr);
  EXPECT_NEAR(total, 1, 1e-6);
}

TEST(MeanSaddle, RatioApproachesOne) {
  const auto pr = AsymptoticProfile::make(1, 1);
  const double r4 = mean_vs_saddle_check(10000, pr).ratio();
  const double r6 = mean_vs_saddle_check(1000000, pr).ratio();
  EXPECT_NEAR(r4, 1, 0.05);
  EXPECT_LT(std::abs(r6 - 1), std::abs(r4 - 1));
  EXPECT_NEAR(mean_vs_saddle_check(1000000, AsymptoticProfile::make(2, 1)).ratio(), 1, 0.05);
}
