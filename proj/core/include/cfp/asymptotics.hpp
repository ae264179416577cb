#ifndef CFP_ASYMPTOTICS_HPP
#define CFP_ASYMPTOTICS_HPP

#include "cfp/parameter_function.hpp"

namespace cfp {

/// Second-order constant A(p) in
///   sum_k k^(p-1) e^(-delta k) = Gamma(p) (delta^-p + A(p)) + O(delta).
/// closed: 2 (2 pi)^-p zeta(p) cos(pi p / 2), p > 1 only.
/// limit:  Richardson extrapolation (three levels, delta halving from 1e-2) of
///         sum/Gamma(p) - delta^-p, any p > 0.
double constant_A_closed(double p);
double constant_A_limit(double p, double delta0 = 1e-2);
/// closed for p > 1, limit otherwise.
double constant_A(double p);

/// Constants and scaling maps for a_k = q k^(p-1).
struct AsymptoticProfile {
  double p = 1, q = 1;
  double A_p = 0, A_p1 = 0;  // A(p), A(p+1)
  double Q_p = 0, d_p = 0;
  double Q_tilde = 0, d_tilde = 0;
  double h1 = 0, h2 = 0, h3 = 0;

  static AsymptoticProfile make(double p, double q = 1);

  /// N^{p/(p+1)} and N^{p/(2p+2)}
  double mass_exponent() const { return p / (p + 1); }
  double center(double N) const;  // Q~ N^{p/(p+1)}
  double scale(double N) const;   // sqrt(d~) N^{p/(2p+2)}

  /// n = Q~ N^{p/(p+1)} + s N^{p/(2p+2)} and its inverse.
  double s_of_n(double n, double N) const;
  double n_of_s(double s, double N) const;
};

// ---- free parameter and saddle point expansions ---------------------------

enum class ExpansionOrder { leading, two_term };

/// delta(alpha) = p/alpha (1 - A(p) p^p alpha^-p) (two_term) or p/alpha.
long double delta_expansion(long double alpha, const AsymptoticProfile& profile,
                       ExpansionOrder order = ExpansionOrder::two_term);

/// sigma_N from the finite sum sum_{k<=N} q k^p e^{-k sigma} = N.
long double solve_sigma(int N, double p, double q = 1);
long double solve_sigma(int N, const ParameterFunction& a);

/// (N/(q Gamma(p+1)))^{-1/(p+1)} and that plus
/// (A(p+1)/(p+1)) (q Gamma(p+1)/N)^{(p+2)/(p+1)}.
double sigma_expansion(double N, const AsymptoticProfile& profile,
                       ExpansionOrder order = ExpansionOrder::two_term);

/// The infinite-sum tail sum_{k>N} q k^p e^{-k sigma} dropped by the finite
/// saddle equation.
double sigma_tail(int N, double sigma, double p, double q = 1);

/// B_N^2 = sum_{k<=N} q k^{p+1} e^{-k sigma}.
double B_N_squared(int N, double sigma, double p, double q = 1);
/// q (N/(q Gamma(p+1)))^{(p+2)/(p+1)} Gamma(p+2).
double B_N_squared_asymptote(double N, double p, double q = 1);

// ---- partition function ---------------------------------------------------

/// log of h1 N^{-(p+2)/(2(p+1))} exp(h2 N^{p/(p+1)} + h3); q = 1 only.
double log_cN_closed(double N, const AsymptoticProfile& profile);
/// log of exp(N sigma + sum_{k<=N} a_k e^{-k sigma}) / sqrt(2 pi B_N^2) with
/// the solved sigma_N; any q.
double log_cN_saddle(int N, double p, double q = 1);

// ---- limit theorems -------------------------------------------------------

/// f(N; s) = N^{-p/(2p+2)} exp(-s^2/(2 d~)) / sqrt(2 pi d~).
double local_limit_density(double N, double s, const AsymptoticProfile& profile);

/// (n - Q~ N^{p/(p+1)}) / (sqrt(d~) N^{p/(2p+2)}).
double clt_standardize(double n, double N, const AsymptoticProfile& profile);

struct MeanSaddlePair {
  double predicted_mean;  // Q~ N^{p/(p+1)}
  double saddle_series;   // S(e^{-sigma_N}) = sum_k a_k e^{-k sigma_N}
  double ratio() const { return predicted_mean / saddle_series; }
};
MeanSaddlePair mean_vs_saddle_check(int N, const AsymptoticProfile& profile);

}  // namespace cfp

#endif  // CFP_ASYMPTOTICS_HPP
