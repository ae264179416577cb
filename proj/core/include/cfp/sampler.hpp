#ifndef CFP_SAMPLER_HPP
#define CFP_SAMPLER_HPP

#include "cfp/parameter_function.hpp"
#include "cfp/partition.hpp"
#include "cfp/random.hpp"

#include <cstdint>
#include <string_view>
#include <vector>

namespace cfp {

// ---- assembly presets -----------------------------------------------------

/// Labelled structures whose component counts are conditioned Poisson:
///   colored_linear_trees(q)  forests of linear trees, vertices colored in
///                            q ways: a_k = q^k
///   rooted_linear_trees      m_k = k k!, so a_k = k
///   compositions             a_k = 1; a composition of N with m summands
///                            weighted by 1/m! has total weight c_N, and nu_N
///                            is its number of summands
enum class Assembly { colored_linear_trees, rooted_linear_trees, compositions };

Assembly parse_assembly(std::string_view name);
const char* to_string(Assembly assembly);
/// q is the color count for colored_linear_trees and must be 1 otherwise.
ParameterFunction assembly_preset(Assembly assembly, const Rational& q = 1);

// ---- conditioned Poisson sampler --------------------------------------------

/// Independent Z_k ~ Poisson(a_k t^k), k = 1..N, with the size law
/// P(size = k) = lambda_k / Lambda.
class TiltedPoissonSpec {
 public:
  TiltedPoissonSpec(const ParameterFunction& a, int N, double t);

  int N() const { return N_; }
  double tilt() const { return t_; }
  double lambda(int k) const { return lambda_[k]; }
  double total_mean() const { return Lambda_; }
  /// E sum k Z_k and Var sum k Z_k
  double expected_mass() const { return mass_mean_; }
  double mass_variance() const { return mass_var_; }

  /// Draws from Poisson(Lambda) and from the size law by inverse CDF.
  long draw_count(Rng& rng) const;
  int draw_size(Rng& rng) const;

 private:
  int N_;
  double t_;
  std::vector<double> lambda_;      // index 1..N
  std::vector<double> size_cdf_;    // size_cdf_[k-1] = P(size <= k)
  std::vector<double> count_cdf_;   // Poisson(Lambda) CDF
  double Lambda_ = 0, mass_mean_ = 0, mass_var_ = 0;
};

struct SamplerStats {
  std::uint64_t proposals = 0;
  std::uint64_t accepted = 0;
  double predicted_acceptance = 0;
  double acceptance() const { return proposals ? static_cast<double>(accepted) / proposals : 0.0; }
};

inline constexpr std::uint64_t kDefaultProposalBudget = 10'000'000;

/// One exact draw from mu_N. Throws BudgetExhausted after `budget` rejected
/// proposals, with measured and predicted acceptance in the message.
Partition sample_equilibrium(const TiltedPoissonSpec& spec, Rng& rng,
                             std::uint64_t budget = kDefaultProposalBudget,
                             SamplerStats* stats = nullptr);

/// `count` draws. Work is cut into fixed chunks, chunk c drawing from stream
/// (seed, c), so the output does not depend on the thread count. The budget
/// applies per draw.
std::vector<Partition> sample_many(const TiltedPoissonSpec& spec, std::size_t count, std::uint64_t seed,
                                   int threads = 1, std::uint64_t budget = kDefaultProposalBudget,
                                   SamplerStats* stats = nullptr);

/// t* = e^{-sigma_N}, the tilt with E sum k Z_k = N.
double optimal_tilt(int N, const ParameterFunction& a);

/// (2 pi Var sum k Z_k)^{-1/2} at tilt t; equals (2 pi B_N^2)^{-1/2} at t*.
double predicted_acceptance(const TiltedPoissonSpec& spec);

}  // namespace cfp

#endif  // CFP_SAMPLER_HPP
