#ifndef CFP_RATES_HPP
#define CFP_RATES_HPP

#include "cfp/parameter_function.hpp"
#include "cfp/partition.hpp"
#include "cfp/rational.hpp"

#include <map>
#include <vector>

namespace cfp {

/// Which side of the reversibility ratio psi/phi = a(|J|) / prod a(j_l) is
/// held at one.
enum class RateNormalization { unit_fragmentation, unit_coagulation };

RateNormalization parse_normalization(std::string_view name);

/// Coagulation and fragmentation intensities psi_s, phi_s for s = 2..k.
class RateSystem {
 public:
  RateSystem(ParameterFunction a, int k,
             RateNormalization normalization = RateNormalization::unit_fragmentation);

  int k() const { return k_; }
  const ParameterFunction& weights() const { return a_; }
  RateNormalization normalization() const { return normalization_; }

  double psi(const InteractionTuple& J) const;
  double phi(const InteractionTuple& J) const;
  Rational psi_exact(const InteractionTuple& J) const;
  Rational phi_exact(const InteractionTuple& J) const;

  /// log(a(|J|) / prod a(j_l)), the log of psi/phi.
  double log_ratio(const InteractionTuple& J) const;

  /// Multiplies psi(J) by `factor`, breaking reversibility on purpose. Only
  /// meant for checking that the balance test notices.
  void perturb_psi(const InteractionTuple& J, const Rational& factor);
  bool perturbed() const { return !perturbations_.empty(); }

  /// True when phi is the same for every tuple (fragment choice is uniform).
  bool uniform_phi() const { return normalization_ == RateNormalization::unit_fragmentation; }

 private:
  void check_order(const InteractionTuple& J) const;
  Rational perturbation(const InteractionTuple& J) const;

  ParameterFunction a_;
  int k_;
  RateNormalization normalization_;
  std::map<std::vector<int>, Rational> perturbations_;
};

/// Psi_s(J; eta) = prod over distinct sizes l of n_l! / (n_l - m_l)! times
/// psi(J): the rate of all J-coagulations, counted over ordered selections of
/// distinct groups. Zero when J cannot act on eta or its order exceeds k.
double total_coagulation_rate(const Partition& eta, const InteractionTuple& J, const RateSystem& rs);
Rational total_coagulation_rate_exact(const Partition& eta, const InteractionTuple& J, const RateSystem& rs);

/// Phi_s(J; eta) = n_{|J|} phi(J).
double total_fragmentation_rate(const Partition& eta, const InteractionTuple& J, const RateSystem& rs);
Rational total_fragmentation_rate_exact(const Partition& eta, const InteractionTuple& J, const RateSystem& rs);

/// prod over distinct sizes of n_l (n_l - 1) ... (n_l - m_l + 1); 0 if short.
std::uint64_t selection_multiplicity(const Partition& eta, const InteractionTuple& J);

}  // namespace cfp

#endif  // CFP_RATES_HPP
