#ifndef CFP_VERIFICATION_HPP
#define CFP_VERIFICATION_HPP

#include "cfp/asymptotics.hpp"
#include "cfp/measure.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace cfp {

enum class ExperimentMode { exact, monte_carlo };
/// Which Monte Carlo route feeds monte_carlo rows.
enum class MonteCarloSource { sampler, gillespie };

struct Tolerances {
  double llt = 0.15;        // max relative LLT error at the largest N
  double ks = 0.05;         // KS distance at the largest N
  double slope = 0.03;      // |fitted slope - p/(p+1)|
  double mc_sigmas = 3.0;   // Monte Carlo agreement band
};

struct ExperimentConfig {
  std::vector<int> N_grid{250, 500, 1000, 2000};
  double p = 1, q = 1;
  int k = 2;
  ExperimentMode mode = ExperimentMode::exact;
  MonteCarloSource source = MonteCarloSource::sampler;
  /// samples per N for the sampler; post-burn-in events for Gillespie
  std::uint64_t sample_budget = 100'000;
  std::uint64_t seed = 1;
  Tolerances tolerances;
  std::string output;  // report directory; empty writes nothing
  int threads = 1;

  /// Throws ConfigError on an empty or non-increasing grid, non-positive
  /// budgets or parameters.
  void validate() const;

  /// Strict JSON reader: unknown keys are errors.
  static ExperimentConfig from_json(std::string_view text);
  std::string to_json() const;
};

/// max over |s| <= window of |P(nu_N = n) / f(N; s) - 1|, s from the n <-> s map.
double llt_error(int N, const AsymptoticProfile& profile, const GroupCountDistribution& dist,
                 double window = 3.0);

/// max over lattice midpoints n + 1/2 (n = 0..N) of
/// |P(nu_N <= n) - Phi((n + 1/2 - center) / scale)|.
double clt_distance(int N, const AsymptoticProfile& profile, const GroupCountDistribution& dist);
/// Same for an empirical law given as probabilities on n = 1..N.
double clt_distance(int N, const AsymptoticProfile& profile, const std::vector<double>& probability_by_n);

struct ComparisonRow {
  int N = 0;
  std::string oracle;  // exact_dp, root_of_unity, rejection_sampler, gillespie
  double mean = 0, variance = 0;
  double predicted_mean = 0, predicted_variance = 0;
  double ks = 0;
  double llt = -1;            // exact rows only; -1 when not computed
  double mean_standard_error = 0;  // Monte Carlo rows
  std::uint64_t samples = 0;
  std::vector<double> probability;  // n = 1..N
};

struct ComparisonReport {
  ExperimentConfig config;
  std::vector<ComparisonRow> rows;
  double mean_slope = 0, variance_slope = 0;  // log-log fits over the grid
  bool llt_non_increasing = false, ks_non_increasing = false;

  std::string to_json() const;
};

/// Computes one row per N (concurrently when threads > 1; row order is the
/// grid order) and, when config.output is set, writes report.json and
/// nu_N<value>.csv into that directory.
ComparisonReport run_suite(const ExperimentConfig& config);

/// Non-increasing allowing at most one inversion smaller than `slack`.
bool non_increasing(const std::vector<double>& values, double slack = 0.0);

}  // namespace cfp

#endif  // CFP_VERIFICATION_HPP
