#ifndef CFP_KHINTCHINE_HPP
#define CFP_KHINTCHINE_HPP

#include "cfp/parameter_function.hpp"

#include <cmath>
#include <vector>

namespace cfp {

struct SumMoments {
  long double M1, M2, M3;  // E T_n, Var T_n, E (T_n - E T_n)^3
};

/// The tilted size variable: P(xi = l) = a_l e^{-delta l} / S(delta).
/// Series are summed in extended precision up to a truncation K beyond which
/// the remaining mass of every moment series is below 1e-18 relative
/// (geometric bound for power weights; tables are summed in full).
class TiltedVariable {
 public:
  TiltedVariable(const ParameterFunction& a, long double delta);

  const ParameterFunction& weights() const { return a_; }
  long double delta() const { return delta_; }
  long double S() const { return S_; }
  long double log_S() const { return std::log(S_); }
  long truncation() const { return K_; }
  long double tail_bound() const { return tail_; }

  long double pmf(long l) const;
  long double log_pmf(long l) const;
  /// P(xi = l) for l = 0..L (index 0 is zero).
  std::vector<long double> pmf_table(long L) const;

  long double mean() const { return mean_; }
  long double variance() const { return var_; }
  long double third_central() const { return mu3_; }
  SumMoments moments(long n) const;

 private:
  ParameterFunction a_;
  long double delta_;
  long double S_ = 0, mean_ = 0, var_ = 0, mu3_ = 0, tail_ = 0;
  long K_ = 0;
};

/// S(delta) = sum_k a_k e^{-delta k}.
long double series_S(long double delta, const ParameterFunction& a);

/// Smallest admissible delta: 0, or log h for tilted power weights.
long double delta_floor(const ParameterFunction& a);

/// Unique delta with n E xi = N (E xi = alpha for the alpha overload), to
/// relative residual 1e-12. For n = N the root is at infinity; the returned
/// delta then has E xi - 1 below 1e-13.
long double solve_delta(long n, long N, const ParameterFunction& a);
long double solve_delta_alpha(long double alpha, const ParameterFunction& a);

struct ConvolutionMass {
  long double probability;
  long double log_probability;
  /// rounding estimate, relative
  double error_estimate;
};

/// P(T_n = N) from the n-fold convolution of a pmf given on 0..K (K >= N),
/// by binary exponentiation on the lattice [0, N]. Each stage is rescaled to
/// unit peak and the scale carried in log form, so masses far below double
/// range stay representable.
ConvolutionMass convolution_power_at(const std::vector<long double>& pmf, long n, long N);

/// P(T_n = N) for the tilted variable.
ConvolutionMass sum_pmf(long n, const TiltedVariable& tv, long N);

/// P(nu_N = n) = S^n e^{delta N} P(T_n = N) / (c_N n!), assembled in logs.
double representation_probability(long n, long N, long double delta, const ParameterFunction& a);
double representation_log_probability(long n, long N, long double delta, const ParameterFunction& a);

}  // namespace cfp

#endif  // CFP_KHINTCHINE_HPP
