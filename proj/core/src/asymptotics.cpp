#include "cfp/asymptotics.hpp"

#include "cfp/error.hpp"
#include "cfp/measure.hpp"
#include "cfp/numeric.hpp"
#include "cfp/poisson_summation.hpp"

#include <cmath>
#include <numbers>

namespace cfp {

namespace {

constexpr double kPi = std::numbers::pi;

void check_p(double p) {
  if (!(p > 0) || !std::isfinite(p)) throw ConfigError("p must be positive");
}

void check_q(double q) {
  if (!(q > 0) || !std::isfinite(q)) throw ConfigError("q must be positive");
}

// sum_{k=from}^{to} q k^e exp(-k sigma) in long double; to < 0 means infinity
long double power_sum(long from, long to, long double sigma, long double e, long double q) {
  CompensatedSum<long double> s;
  for (long k = from; to < 0 || k <= to; ++k) {
    const long double kd = static_cast<long double>(k);
    const long double term = std::exp(e * std::log(kd) - sigma * kd);
    s += term;
    if (to < 0 && kd * sigma > e + 1) {
      const long double r = std::pow((kd + 2) / (kd + 1), std::max(e, 0.0L)) * std::exp(-sigma);
      if (r < 1 && term / (1 - r) <= 1e-20L * s.value()) break;
    }
    if (to < 0 && k > 4'000'000'000L) throw ModelError("tail sum did not converge");
  }
  return q * s.value();
}

}  // namespace

double constant_A_closed(double p) {
  if (!(p > 1)) throw ConfigError("closed form of A(p) needs p > 1");
  return 2 * std::pow(2 * kPi, -p) * std::riemann_zeta(p) * std::cos(kPi * p / 2);
}

double constant_A_limit(double p, double delta0) {
  check_p(p);
  const long double gp = std::tgamma(static_cast<long double>(p));
  auto g = [&](long double d) {
    return power_exp_sum(d, p) / gp - std::pow(d, -static_cast<long double>(p));
  };
  const long double d = delta0;
  return static_cast<double>((g(d) - 6 * g(d / 2) + 8 * g(d / 4)) / 3);
}

double constant_A(double p) {
  check_p(p);
  return p > 1 ? constant_A_closed(p) : constant_A_limit(p);
}

AsymptoticProfile AsymptoticProfile::make(double p, double q) {
  check_p(p);
  check_q(q);
  AsymptoticProfile pr;
  pr.p = p;
  pr.q = q;
  pr.A_p = constant_A(p);
  pr.A_p1 = constant_A(p + 1);
  const double g1 = std::tgamma(p + 1);
  pr.Q_p = std::pow(g1, 1 / (p + 1)) / p;
  pr.d_p = pr.Q_p / (p + 1);
  const double qs = std::pow(q, 1 / (p + 1));
  pr.Q_tilde = qs * pr.Q_p;
  pr.d_tilde = qs * pr.d_p;
  pr.h1 = std::pow(g1, 1 / (2 * (p + 1))) / std::sqrt(2 * kPi * (p + 1));
  pr.h2 = (p + 1) * pr.Q_p;
  pr.h3 = std::tgamma(p) * pr.A_p;
  return pr;
}

double AsymptoticProfile::center(double N) const { return Q_tilde * std::pow(N, p / (p + 1)); }

double AsymptoticProfile::scale(double N) const {
  return std::sqrt(d_tilde) * std::pow(N, p / (2 * p + 2));
}

double AsymptoticProfile::s_of_n(double n, double N) const {
  return (n - center(N)) / std::pow(N, p / (2 * p + 2));
}

double AsymptoticProfile::n_of_s(double s, double N) const {
  return center(N) + s * std::pow(N, p / (2 * p + 2));
}

long double delta_expansion(long double alpha, const AsymptoticProfile& pr, ExpansionOrder order) {
  if (!(alpha > 0)) throw ConfigError("alpha must be positive");
  const long double p = pr.p;
  const long double lead = p / alpha;
  if (order == ExpansionOrder::leading) return lead;
  return lead * (1 - pr.A_p * std::pow(p, p) * std::pow(alpha, -p));
}

long double solve_sigma(int N, double p, double q) {
  check_p(p);
  check_q(q);
  return saddle_point(N, ParameterFunction::power(q, p));
}

long double solve_sigma(int N, const ParameterFunction& a) { return saddle_point(N, a); }

double sigma_expansion(double N, const AsymptoticProfile& pr, ExpansionOrder order) {
  const double g1 = std::tgamma(pr.p + 1);
  const double Nq = N / pr.q;
  const double lead = std::pow(Nq / g1, -1 / (pr.p + 1));
  if (order == ExpansionOrder::leading) return lead;
  return lead + pr.A_p1 / (pr.p + 1) * std::pow(g1 / Nq, (pr.p + 2) / (pr.p + 1));
}

double sigma_tail(int N, double sigma, double p, double q) {
  if (!(sigma > 0)) throw ConfigError("sigma must be positive");
  return static_cast<double>(power_sum(static_cast<long>(N) + 1, -1, sigma, p, q));
}

double B_N_squared(int N, double sigma, double p, double q) {
  if (N < 1) throw ConfigError("N must be >= 1");
  return static_cast<double>(power_sum(1, N, sigma, p + 1, q));
}

double B_N_squared_asymptote(double N, double p, double q) {
  return q * std::pow(N / (q * std::tgamma(p + 1)), (p + 2) / (p + 1)) * std::tgamma(p + 2);
}

double log_cN_closed(double N, const AsymptoticProfile& pr) {
  if (pr.q != 1) throw ModelError("closed c_N asymptote is stated for q = 1; use the saddle form");
  const double p = pr.p;
  return std::log(pr.h1) - (p + 2) / (2 * (p + 1)) * std::log(N) + pr.h2 * std::pow(N, p / (p + 1)) + pr.h3;
}

double log_cN_saddle(int N, double p, double q) {
  const long double sigma = solve_sigma(N, p, q);
  const long double B2 = power_sum(1, N, sigma, p + 1, q);
  const long double S = power_sum(1, N, sigma, p - 1, q);
  return static_cast<double>(-0.5L * std::log(2 * std::numbers::pi_v<long double> * B2) + N * sigma + S);
}

double local_limit_density(double N, double s, const AsymptoticProfile& pr) {
  const double p = pr.p, d = pr.d_tilde;
  return std::pow(N, -p / (2 * p + 2)) * std::exp(-s * s / (2 * d)) / std::sqrt(2 * kPi * d);
}

double clt_standardize(double n, double N, const AsymptoticProfile& pr) {
  return (n - pr.center(N)) / pr.scale(N);
}

MeanSaddlePair mean_vs_saddle_check(int N, const AsymptoticProfile& pr) {
  const long double sigma = solve_sigma(N, pr.p, pr.q);
  const auto series = power_exp_series({sigma, 0.0L}, pr.p);
  return {pr.center(N), static_cast<double>(pr.q * series.value.real())};
}

}  // namespace cfp
