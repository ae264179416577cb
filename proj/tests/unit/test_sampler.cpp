#include "cfp/asymptotics.hpp"
#include "cfp/error.hpp"
#include "cfp/generator.hpp"
#include "cfp/gillespie.hpp"
#include "cfp/measure.hpp"
#include "cfp/numeric.hpp"
#include "cfp/sampler.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>

using namespace cfp;

namespace {

double chi_square_pvalue(int N, const ParameterFunction& a, const std::vector<Partition>& draws) {
  std::map<Partition, double> observed;
  for (const auto& eta : draws) observed[eta] += 1;
  const auto all = oracle::partitions(N);
  double chi2 = 0;
  for (const auto& parts : all) {
    const auto eta = Partition::from_parts(parts);
    const double e = draws.size() * measure_probability(eta, a);
    const double o = observed.count(eta) ? observed[eta] : 0.0;
    chi2 += (o - e) * (o - e) / e;
  }
  return chi_square_survival(chi2, static_cast<double>(all.size() - 1));
}

std::vector<double> nu_law(int N, const std::vector<Partition>& draws) {
  std::vector<double> law(static_cast<std::size_t>(N), 0.0);
  for (const auto& eta : draws) law[eta.group_count() - 1] += 1.0 / draws.size();
  return law;
}

}  // namespace

TEST(Presets, MapToParameterFunctions) {
  EXPECT_EQ(assembly_preset(Assembly::rooted_linear_trees).exact(5), 5);
  const auto comp = assembly_preset(Assembly::compositions);
  for (int k = 1; k <= 10; ++k) EXPECT_EQ(comp.exact(k), 1);
  const auto trees = assembly_preset(Assembly::colored_linear_trees, 1);
  for (int k = 1; k <= 10; ++k) EXPECT_EQ(trees.exact(k), 1);
  EXPECT_EQ(assembly_preset(Assembly::colored_linear_trees, 3).exact(4), 81);
  EXPECT_EQ(parse_assembly("compositions"), Assembly::compositions);
  EXPECT_THROW(parse_assembly("forests"), ConfigError);
  EXPECT_THROW(assembly_preset(Assembly::compositions, 2), ConfigError);
}

TEST(Presets, CompositionsAreCountedByTheirWeight) {
  // N! c_N sums the Lah numbers: sets of linearly ordered blocks of [N]
  const auto c = partition_function_exact(6, assembly_preset(Assembly::compositions));
  EXPECT_EQ(c[6] * oracle::factorial(6), 4051);
  // equivalently, compositions of N with m summands weighted by 1/m!
  for (int N = 1; N <= 6; ++N) {
    oracle::Q total = 0;
    for (int m = 1; m <= N; ++m) total += oracle::binomial(N - 1, m - 1) / oracle::factorial(m);
    EXPECT_EQ(c[N], total);
  }
}

TEST(Sampler, SingleUnitIsAlwaysOneGroup) {
  const auto a = ParameterFunction::power(1.0, 1.0);
  for (const auto& eta : sample_many(TiltedPoissonSpec(a, 1, optimal_tilt(1, a)), 200, 3)) {
    EXPECT_EQ(eta, Partition::parse("1^1"));
  }
}

TEST(Sampler, ChiSquareAgainstExactMeasure) {
  const auto a = ParameterFunction::power(1.0, 1.0);
  for (int N = 2; N <= 6; ++N) {
    const auto draws = sample_many(TiltedPoissonSpec(a, N, 0.5), 100000, 100 + N);
    EXPECT_GT(chi_square_pvalue(N, a, draws), 0.01) << N;
  }
}

TEST(Sampler, PresetsAreExact) {
  for (auto preset : {Assembly::compositions, Assembly::rooted_linear_trees}) {
    const auto a = assembly_preset(preset);
    for (int N : {4, 8}) {
      const auto draws = sample_many(TiltedPoissonSpec(a, N, optimal_tilt(N, a)), 200000, 7 * N);
      EXPECT_GT(chi_square_pvalue(N, a, draws), 0.001) << to_string(preset) << " N=" << N;
    }
  }
}

TEST(Sampler, TiltInvariance) {
  const auto a = ParameterFunction::power(1.0, 1.0);
  const auto x = nu_law(10, sample_many(TiltedPoissonSpec(a, 10, 0.3), 100000, 21));
  const auto y = nu_law(10, sample_many(TiltedPoissonSpec(a, 10, 0.6), 100000, 22));
  EXPECT_LT(total_variation(x, y), 0.02);
}

TEST(Sampler, OptimalTiltMatchesSaddlePoint) {
  const auto a = ParameterFunction::power(1.0, 1.0);
  const double t = optimal_tilt(100, a);
  EXPECT_NEAR(t, std::exp(-static_cast<double>(solve_sigma(100, 1.0))), 1e-14);
  const TiltedPoissonSpec spec(a, 100, t);
  EXPECT_NEAR(spec.expected_mass() / 100, 1, 0.01);
  EXPECT_NEAR(predicted_acceptance(spec), 1 / std::sqrt(2 * M_PI * spec.mass_variance()), 1e-12);
}

TEST(Sampler, AcceptanceNearPrediction) {
  const auto a = ParameterFunction::power(1.0, 1.0);
  SamplerStats stats;
  sample_many(TiltedPoissonSpec(a, 100, optimal_tilt(100, a)), 5000, 4, 1, kDefaultProposalBudget, &stats);
  const double sigma = static_cast<double>(solve_sigma(100, 1.0));
  const double predicted = 1 / std::sqrt(2 * M_PI * B_N_squared(100, sigma, 1.0));
  EXPECT_GT(stats.acceptance() / predicted, 0.5);
  EXPECT_LT(stats.acceptance() / predicted, 2);
  EXPECT_EQ(stats.accepted, 5000u);
}

TEST(Sampler, OutputIndependentOfThreadCount) {
  const auto a = ParameterFunction::power(1.0, 2.0);
  const TiltedPoissonSpec spec(a, 30, optimal_tilt(30, a));
  EXPECT_EQ(sample_many(spec, 3000, 9, 1), sample_many(spec, 3000, 9, 3));
}

TEST(Sampler, BudgetExhaustionReportsDiagnostics) {
  const auto a = ParameterFunction::power(1.0, 1.0);
  const TiltedPoissonSpec spec(a, 400, 0.05);
  Rng rng(1);
  try {
    sample_equilibrium(spec, rng, 50);
    FAIL() << "expected BudgetExhausted";
  } catch (const BudgetExhausted& e) {
    EXPECT_NE(std::string(e.what()).find("acceptance"), std::string::npos);
  }
  EXPECT_THROW(TiltedPoissonSpec(a, 10, 0), ConfigError);
}

TEST(Sampler, AgreesWithDynamics) {
  const int N = 50;
  const auto a = ParameterFunction::power(1.0, 1.0);
  const auto sampled = nu_law(N, sample_many(TiltedPoissonSpec(a, N, optimal_tilt(N, a)), 100000, 31));
  SimulationConfig cfg(N, a);
  cfg.events = 1000000;
  cfg.burnin = 10000;
  cfg.thin = 1000000;
  cfg.seed = 32;
  EXPECT_LT(total_variation(sampled, simulate(cfg).nu_distribution()), 0.03);
}
