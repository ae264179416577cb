#ifndef CFP_POISSON_SUMMATION_HPP
#define CFP_POISSON_SUMMATION_HPP

#include <complex>

namespace cfp {

enum class SeriesRoute { automatic, poisson, direct };
const char* to_string(SeriesRoute route);

struct SeriesResult {
  std::complex<long double> value;
  SeriesRoute route = SeriesRoute::direct;
  /// Terms summed explicitly: k-terms (direct) or lattice points |l| <= L (poisson).
  long terms = 0;
  /// Estimated relative error of `value`.
  double error_estimate = 0;
};

/// sum_{k>=1} k^(p-1) e^(-z k) for Re z > 0.
///
/// poisson: Gamma(p) sum_l (z + 2 pi i l)^(-p) over all integers l, valid for
///   p > 1. The lattice sum is taken explicitly for |l| <= L and the two tails
///   by Euler-Maclaurin (integral, half end term, three Bernoulli
///   corrections). p = 1 is admitted through the symmetric pairing of l and -l,
///   which converges to the sum plus 1/2.
/// direct: compensated summation in extended precision, stopped by a
///   geometric bound on the remaining terms.
/// automatic: poisson when p >= 1 and Re z < 1/2, else direct.
///
/// `rel_tol` is a relative target; `lattice_cutoff` > 0 forces L.
SeriesResult power_exp_series(std::complex<long double> z, long double p,
                              long double rel_tol = 1e-16L,
                              SeriesRoute route = SeriesRoute::automatic,
                              long lattice_cutoff = 0);

/// Real-argument convenience: sum_{k>=1} k^(p-1) e^(-delta k), direct route.
long double power_exp_sum(long double delta, long double p, long double rel_tol = 1e-18L);

}  // namespace cfp

#endif  // CFP_POISSON_SUMMATION_HPP
