#ifndef CFP_MEASURE_HPP
#define CFP_MEASURE_HPP

#include "cfp/parameter_function.hpp"
#include "cfp/partition.hpp"
#include "cfp/rational.hpp"

#include <string>
#include <vector>

namespace cfp {

/// A finite law. `probability` is always filled; `exact` only in rational
/// mode. `log_normalizer` is log c_N. `error_bound` is an absolute bound per
/// entry (0 in rational mode).
template <class Support>
struct WeightedDistribution {
  std::vector<Support> support;
  std::vector<double> probability;
  std::vector<Rational> exact;
  double log_normalizer = 0;
  Arithmetic mode = Arithmetic::floating;
  std::string method;
  double error_bound = 0;

  std::size_t size() const { return support.size(); }
};

/// Law of the number of groups: support n = 1..N (n = 0 only for N = 0).
using GroupCountDistribution = WeightedDistribution<int>;

// ---- weights and partition function ---------------------------------------

/// prod_j a_j^{n_j} / n_j!
Rational weight_exact(const Partition& eta, const ParameterFunction& a);
double log_weight(const Partition& eta, const ParameterFunction& a);

/// c_0..c_N from N c_N = sum_k k a_k c_{N-k}, c_0 = 1, in exact arithmetic.
std::vector<Rational> partition_function_exact(int N, const ParameterFunction& a);
/// c_N as the sum of weights over every partition of N.
Rational partition_function_enumerated(int N, const ParameterFunction& a,
                                       int guard = kEnumerationGuard);

/// log c_0..log c_N by the same recursion evaluated with log-sum-exp; stays
/// finite long after c_N leaves double range. log c_m = -inf when c_m = 0
/// (possible only for restricted weight tables).
std::vector<double> log_partition_function(int N, const ParameterFunction& a);
double log_partition_function_enumerated(int N, const ParameterFunction& a,
                                         int guard = kEnumerationGuard);

// ---- invariant measure ----------------------------------------------------

Rational measure_probability_exact(const Partition& eta, const ParameterFunction& a);
double measure_probability(const Partition& eta, const ParameterFunction& a);

/// mu_N over every partition of N in enumeration order.
WeightedDistribution<Partition> invariant_measure(int N, const ParameterFunction& a,
                                                  Arithmetic mode,
                                                  int guard = kEnumerationGuard);

// ---- number of groups -----------------------------------------------------

enum class CountMethod { automatic, enumeration, coefficient_dp, root_of_unity };
const char* to_string(CountMethod method);

struct CountOptions {
  Arithmetic mode = Arithmetic::floating;
  CountMethod method = CountMethod::automatic;
  int threads = 1;
  /// Largest N for the floating coefficient DP (O(N^3) time, O(N^2) memory).
  int coefficient_guard = 3000;
  /// Largest N for exact rational coefficients.
  int rational_guard = 150;
  int enumeration_guard = kEnumerationGuard;
};

/// Exact law of nu_N. Methods:
///   enumeration     sum over Omega_N by group count (oracle)
///   coefficient_dp  N c_{N,n} = sum_k k a_k c_{N-k,n-1} on the marker
///                   polynomial c_N(u) (rational or float)
///   root_of_unity   evaluate c_N(u) on the unit circle and invert the DFT
///                   (float only; for N beyond the DP guard)
/// `automatic` picks enumeration never, the DP up to its guard, else the
/// transform.
GroupCountDistribution group_count_distribution(int N, const ParameterFunction& a,
                                                CountOptions options = {});

/// E nu_N = sum_k a_k c_{N-k} / c_N, from log c_0..log c_N.
double mean_group_count(int N, const ParameterFunction& a);
double mean_group_count(int N, const ParameterFunction& a, const std::vector<double>& log_c);
Rational mean_group_count_exact(int N, const ParameterFunction& a);

/// Root sigma of sum_{k<=N} k a_k e^{-k sigma} = N. For a_k = q k^(p-1)
/// this is the saddle point sigma_N; exp(-sigma) is the tilt that makes the
/// expected mass of independent Poisson counts equal to N.
long double saddle_point(int N, const ParameterFunction& a);

}  // namespace cfp

#endif  // CFP_MEASURE_HPP
