#ifndef CFP_GENERATOR_HPP
#define CFP_GENERATOR_HPP

#include "cfp/measure.hpp"
#include "cfp/rates.hpp"

#include <map>
#include <vector>

namespace cfp {

/// Off-diagonal transition rates V(eta, xi) of the k-CFP on Omega_N. Rates of
/// distinct tuples that lead to the same xi are summed.
class Generator {
 public:
  struct Transition {
    std::size_t to;
    double rate;
    Rational exact;  // set when the rate system is exact
  };

  /// Enumerates Omega_N (guarded) and every tuple of order 2..k once.
  static Generator build(int N, const RateSystem& rs, int guard = kEnumerationGuard);

  int N() const { return N_; }
  bool exact() const { return exact_; }
  const std::vector<Partition>& states() const { return states_; }
  std::size_t size() const { return states_.size(); }
  std::size_t index_of(const Partition& eta) const;
  const std::vector<Transition>& row(std::size_t i) const { return rows_[i]; }

  /// V(eta_i, eta_j); zero when there is no direct transition.
  double rate(std::size_t i, std::size_t j) const;
  Rational rate_exact(std::size_t i, std::size_t j) const;
  double exit_rate(std::size_t i) const;
  Rational exit_rate_exact(std::size_t i) const;

  bool irreducible() const;

 private:
  int N_ = 0;
  bool exact_ = false;
  std::vector<Partition> states_;
  std::map<Partition, std::size_t> index_;
  std::vector<std::vector<Transition>> rows_;
};

/// The unique pi with pi G = 0, sum pi = 1, by Gaussian elimination: exact
/// rational elimination in rational mode, partial pivoting otherwise.
/// Support order is the enumeration order of Omega_N. Throws ModelError if
/// the chain is reducible.
WeightedDistribution<Partition> stationary_distribution(const Generator& g, Arithmetic mode);

struct BalanceReport {
  Rational max_violation;     // exact; 0 iff detailed balance holds
  double max_violation_float = 0;
  std::size_t pairs_checked = 0;
  Arithmetic mode = Arithmetic::rational;
};

/// max over ordered pairs of |mu(eta) V(eta, xi) - mu(xi) V(xi, eta)|.
/// Exact when the parameter function is; floating otherwise.
BalanceReport check_detailed_balance(int N, const RateSystem& rs, int guard = kEnumerationGuard);
BalanceReport check_detailed_balance(const Generator& g, const RateSystem& rs);

/// Half the l1 distance between two laws on a common support.
double total_variation(const std::vector<double>& p, const std::vector<double>& q);

}  // namespace cfp

#endif  // CFP_GENERATOR_HPP
