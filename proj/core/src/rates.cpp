#include "cfp/rates.hpp"

#include "cfp/error.hpp"

#include <cmath>

namespace cfp {

RateNormalization parse_normalization(std::string_view name) {
  if (name == "unit_fragmentation" || name == "phi1") return RateNormalization::unit_fragmentation;
  if (name == "unit_coagulation" || name == "psi1") return RateNormalization::unit_coagulation;
  throw ConfigError("unknown rate normalization '" + std::string(name) + "'");
}

RateSystem::RateSystem(ParameterFunction a, int k, RateNormalization normalization)
    : a_(std::move(a)), k_(k), normalization_(normalization) {
  if (k < 2) throw ConfigError("interaction order k must be at least 2");
}

void RateSystem::check_order(const InteractionTuple& J) const {
  if (J.order() > k_) throw ConfigError("tuple " + J.to_string() + " exceeds interaction order k");
}

Rational RateSystem::perturbation(const InteractionTuple& J) const {
  const auto it = perturbations_.find(J.sizes());
  return it == perturbations_.end() ? Rational(1) : it->second;
}

double RateSystem::log_ratio(const InteractionTuple& J) const {
  double r = a_.log_value(J.mass());
  for (int j : J.sizes()) r -= a_.log_value(j);
  return r;
}

double RateSystem::psi(const InteractionTuple& J) const {
  check_order(J);
  const double base = normalization_ == RateNormalization::unit_fragmentation ? std::exp(log_ratio(J)) : 1.0;
  return perturbed() ? base * to_double(perturbation(J)) : base;
}

double RateSystem::phi(const InteractionTuple& J) const {
  check_order(J);
  return normalization_ == RateNormalization::unit_fragmentation ? 1.0 : std::exp(-log_ratio(J));
}

Rational RateSystem::psi_exact(const InteractionTuple& J) const {
  check_order(J);
  Rational r = 1;
  if (normalization_ == RateNormalization::unit_fragmentation) {
    r = a_.exact(J.mass());
    for (int j : J.sizes()) r /= a_.exact(j);
  }
  return r * perturbation(J);
}

Rational RateSystem::phi_exact(const InteractionTuple& J) const {
  check_order(J);
  if (normalization_ == RateNormalization::unit_fragmentation) return 1;
  Rational r = 1;
  for (int j : J.sizes()) r *= a_.exact(j);
  return r / a_.exact(J.mass());
}

void RateSystem::perturb_psi(const InteractionTuple& J, const Rational& factor) {
  check_order(J);
  if (sgn(factor) <= 0) throw ConfigError("perturbation factor must be positive");
  perturbations_[J.sizes()] = factor;
}

std::uint64_t selection_multiplicity(const Partition& eta, const InteractionTuple& J) {
  std::uint64_t m = 1;
  for (const auto& [size, mult] : J.multiplicities()) {
    const int n = eta.count(size);
    if (n < mult) return 0;
    for (int i = 0; i < mult; ++i) m *= static_cast<std::uint64_t>(n - i);
  }
  return m;
}

double total_coagulation_rate(const Partition& eta, const InteractionTuple& J, const RateSystem& rs) {
  if (J.order() > rs.k()) return 0.0;
  const auto m = selection_multiplicity(eta, J);
  return m == 0 ? 0.0 : static_cast<double>(m) * rs.psi(J);
}

Rational total_coagulation_rate_exact(const Partition& eta, const InteractionTuple& J, const RateSystem& rs) {
  if (J.order() > rs.k()) return 0;
  const auto m = selection_multiplicity(eta, J);
  if (m == 0) return 0;
  return Rational(Integer(std::to_string(m))) * rs.psi_exact(J);
}

double total_fragmentation_rate(const Partition& eta, const InteractionTuple& J, const RateSystem& rs) {
  if (J.order() > rs.k()) return 0.0;
  const int n = eta.count(J.mass());
  return n == 0 ? 0.0 : n * rs.phi(J);
}

Rational total_fragmentation_rate_exact(const Partition& eta, const InteractionTuple& J, const RateSystem& rs) {
  if (J.order() > rs.k()) return 0;
  const int n = eta.count(J.mass());
  return n == 0 ? Rational(0) : n * rs.phi_exact(J);
}

}  // namespace cfp
