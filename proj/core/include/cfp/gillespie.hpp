#ifndef CFP_GILLESPIE_HPP
#define CFP_GILLESPIE_HPP

#include "cfp/parameter_function.hpp"
#include "cfp/partition.hpp"
#include "cfp/rates.hpp"

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <vector>

namespace cfp {

struct SimulationConfig {
  SimulationConfig(int N, ParameterFunction a) : N(N), a(std::move(a)) {}

  int N;
  ParameterFunction a;
  int k = 2;
  RateNormalization normalization = RateNormalization::unit_fragmentation;
  /// Defaults to N singletons {1:N}.
  std::optional<Partition> initial;
  /// Events after burn-in; the run also stops at max_time.
  long events = 0;
  long burnin = 0;
  /// Keep every thin-th post-burn-in state as a sample; 0 keeps none.
  long thin = 1;
  double max_time = std::numeric_limits<double>::infinity();
  std::uint64_t seed = 1;
  std::uint64_t stream = 0;
  /// Time-weighted occupation per partition (small N only).
  bool track_states = false;
  long rebuild_interval = 10'000;
};

struct TrajectorySample {
  long event_index;  // counted from the end of burn-in
  double time;       // likewise
  int nu;
  int largest;
  int smallest;
};

struct TrajectorySummary {
  Partition final_state;
  std::vector<TrajectorySample> samples;
  /// Time spent with nu = n after burn-in, indexed by n = 0..N.
  std::vector<double> nu_occupation;
  std::map<Partition, double> state_occupation;
  double observed_time = 0;
  long events = 0;
  long total_events = 0;

  /// nu_occupation normalized to a law on n = 1..N (index n-1).
  std::vector<double> nu_distribution() const;
};

/// Continuous-time simulation of the k-CFP: exponential holding times at
/// the total outflow rate, events chosen in proportion to their total rates.
/// Occupation statistics are weighted by holding time, so they estimate the
/// stationary law of the process, not of its jump chain.
TrajectorySummary simulate(const SimulationConfig& config);

/// Trajectory i runs on stream i of config.seed.
std::vector<TrajectorySummary> simulate_many(const SimulationConfig& config, int trajectories, int threads = 1);

}  // namespace cfp

#endif  // CFP_GILLESPIE_HPP
