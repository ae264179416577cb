// Runs the eleven acceptance criteria and prints one PASS/FAIL line each.
// Exit status is the number of failed criteria.

#include "cfp/asymptotics.hpp"
#include "cfp/extremes.hpp"
#include "cfp/generator.hpp"
#include "cfp/gillespie.hpp"
#include "cfp/khintchine.hpp"
#include "cfp/measure.hpp"
#include "cfp/numeric.hpp"
#include "cfp/poisson_summation.hpp"
#include "cfp/sampler.hpp"
#include "cfp/verification.hpp"

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace cfp;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string list(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i]);
  return s + "]";
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] < v[i - 1])) return false;
  }
  return true;
}

double slope_of(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  return fitted_slope(lx, ly);
}

double relative(std::complex<long double> a, std::complex<long double> b) {
  return static_cast<double>(std::abs(a - b) / std::abs(b));
}

Outcome exact_measure() {
  const std::vector<ParameterFunction> weights{ParameterFunction::parse("power:p=1,q=1"),
                                               ParameterFunction::parse("power:p=2,q=1"),
                                               ParameterFunction::parse("power_tilted:p=1,q=1,h=2")};
  int checked = 0;
  for (const auto& a : weights) {
    for (int k : {2, 3}) {
      for (int N = 1; N <= 8; ++N) {
        const RateSystem rs(a, k);
        const auto g = Generator::build(N, rs);
        const auto pi = stationary_distribution(g, Arithmetic::rational);
        const auto mu = invariant_measure(N, a, Arithmetic::rational);
        if (pi.support != mu.support || pi.exact != mu.exact) {
          return {false, "stationary law differs from mu_N at N=" + std::to_string(N) + " a=" + a.describe()};
        }
        if (check_detailed_balance(g, rs).max_violation != 0) {
          return {false, "nonzero detailed-balance residual at N=" + std::to_string(N)};
        }
        ++checked;
      }
    }
  }
  return {true, std::to_string(checked) + " (a, k, N) cases exact, residual 0"};
}

Outcome khintchine_identity() {
  double worst = 0;
  for (const char* spec : {"power:p=1,q=1", "power:p=2,q=1"}) {
    const auto a = ParameterFunction::parse(spec);
    for (int N = 1; N <= 30; ++N) {
      CountOptions opt;
      opt.mode = Arithmetic::rational;
      const auto exact = group_count_distribution(N, a, opt);
      for (long double delta : {0.3L, 0.7L, 1.5L}) {
        for (int n = 1; n <= N; ++n) {
          const double want = exact.probability[n - 1];
          const double got = representation_probability(n, N, delta, a);
          worst = std::max(worst, std::abs(got / want - 1));
        }
      }
    }
  }
  return {worst < 1e-10, "max relative error " + fmt(worst)};
}

Outcome poisson_summation() {
  double closed = 0, paths = 0;
  const std::complex<long double> I(0, 1);
  for (long double re : {0.1L, 0.01L, 0.001L}) {
    for (long double im : {0.0L, 0.5L, 3.0L}) {
      const std::complex<long double> z = re + im * I;
      const auto p1 = power_exp_series(z, 1, 1e-16L, SeriesRoute::poisson).value;
      closed = std::max(closed, relative(p1, 1.0L / (std::exp(z) - 1.0L)));
      const auto p2 = power_exp_series(z, 2, 1e-16L, SeriesRoute::poisson).value;
      const auto e = std::exp(-z);
      closed = std::max(closed, relative(p2, e / ((1.0L - e) * (1.0L - e))));
      for (long double p : {1.5L, 2.0L, 2.5L, 3.0L}) {
        const auto viaP = power_exp_series(z, p, 1e-16L, SeriesRoute::poisson).value;
        const auto viaD = power_exp_series(z, p, 1e-16L, SeriesRoute::direct).value;
        paths = std::max(paths, relative(viaP, viaD));
      }
    }
  }
  const double a2 = std::abs(constant_A(2) + 1.0 / 12);
  const double a3 = std::abs(constant_A(3));
  const double a1 = std::abs(constant_A_limit(1) + 0.5);
  const bool ok = closed < 1e-10 && paths < 1e-10 && a2 < 1e-10 && a3 < 1e-10 && a1 < 1e-6;
  return {ok, "closed " + fmt(closed) + ", poisson-vs-direct " + fmt(paths) + ", |A(2)+1/12| " + fmt(a2) +
                  ", |A(3)| " + fmt(a3) + ", |A_lim(1)+1/2| " + fmt(a1)};
}

Outcome expansions() {
  bool ok = true;
  std::string detail;
  const std::vector<double> alphas{1e2, 1e3, 1e4};
  for (double p : {1.0, 2.0}) {
    const auto pr = AsymptoticProfile::make(p, 1);
    const auto a = ParameterFunction::power(1.0, p);
    std::vector<double> err;
    for (double alpha : alphas) {
      const long double exact = solve_delta_alpha(alpha, a);
      err.push_back(static_cast<double>(std::abs(exact - delta_expansion(alpha, pr, ExpansionOrder::two_term))));
    }
    const double slope = slope_of(alphas, err);
    ok = ok && std::abs(slope + (p + 1)) <= 0.2;
    detail += "delta slope p=" + fmt(p) + " " + fmt(slope) + " (target " + fmt(-(p + 1)) + "); ";
  }
  double worst_residual = 0;
  for (int N : {100, 10000, 1000000}) {
    const long double sigma = solve_sigma(N, 1.0);
    long double sum = 0;
    for (int k = N; k >= 1; --k) sum += k * std::exp(-k * sigma);
    worst_residual = std::max(worst_residual, static_cast<double>(std::abs(sum - N) / N));
  }
  ok = ok && worst_residual < 1e-10;
  const double N = 1e6;
  const double second = (static_cast<double>(solve_sigma(1000000, 1.0)) - 1 / std::sqrt(N)) * std::pow(N, 1.5);
  ok = ok && std::abs(second / (-1.0 / 24) - 1) < 0.1;
  detail += "sigma residual/N " + fmt(worst_residual) + ", second-order coefficient " + fmt(second) +
            " (target " + fmt(-1.0 / 24) + ")";
  return {ok, detail};
}

Outcome partition_function() {
  bool ok = true;
  std::string detail;
  for (double p : {1.0, 2.0}) {
    const auto pr = AsymptoticProfile::make(p, 1);
    const auto logc = log_partition_function(4000, ParameterFunction::power(1.0, p));
    std::vector<double> gaps;
    for (int N : {250, 1000, 4000}) gaps.push_back(std::abs(logc[N] - log_cN_closed(N, pr)));
    ok = ok && strictly_decreasing(gaps);
    if (p == 1) ok = ok && gaps.back() < 0.05;
    detail += "p=" + fmt(p) + " |dlog c_N| " + list(gaps) + "; ";
  }
  detail.resize(detail.size() - 2);
  return {ok, detail};
}

Outcome local_limit() {
  const auto pr = AsymptoticProfile::make(1, 1);
  const auto a = ParameterFunction::power(1.0, 1.0);
  std::vector<double> err;
  for (int N : {500, 2000}) {
    CountOptions opt;
    opt.method = CountMethod::root_of_unity;
    err.push_back(llt_error(N, pr, group_count_distribution(N, a, opt)));
  }
  return {strictly_decreasing(err) && err.back() < 0.15, "max relative LLT error at N=500,2000 " + list(err)};
}

Outcome central_limit() {
  std::map<double, std::vector<double>> ks;
  for (double q : {1.0, 4.0}) {
    const auto pr = AsymptoticProfile::make(1, q);
    for (int N : {500, 1000, 2000}) {
      ks[q].push_back(clt_distance(N, pr, group_count_distribution(N, ParameterFunction::power(q, 1.0))));
    }
  }
  bool scaled = true;
  for (std::size_t i = 0; i < ks[1].size(); ++i) scaled = scaled && ks[4][i] <= 1.5 * ks[1][i];
  const bool ok = strictly_decreasing(ks[1]) && ks[1].back() < 0.05 && scaled;
  return {ok, "KS q=1 " + list(ks[1]) + ", q=4 " + list(ks[4])};
}

Outcome sampler_exactness() {
  const int N = 6;
  const auto a = assembly_preset(Assembly::compositions);
  const auto mu = invariant_measure(N, a, Arithmetic::floating);
  std::map<Partition, std::size_t> index;
  for (std::size_t i = 0; i < mu.size(); ++i) index[mu.support[i]] = i;
  const std::size_t count = 200000;
  const auto draws = sample_many(TiltedPoissonSpec(a, N, optimal_tilt(N, a)), count, 8);
  std::vector<double> observed(mu.size(), 0);
  for (const auto& eta : draws) observed[index.at(eta)] += 1;
  double chi2 = 0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double e = count * mu.probability[i];
    chi2 += (observed[i] - e) * (observed[i] - e) / e;
  }
  const double pvalue = chi_square_survival(chi2, static_cast<double>(mu.size() - 1));

  const auto a1 = ParameterFunction::power(1.0, 1.0);
  SamplerStats stats;
  sample_many(TiltedPoissonSpec(a1, 100, optimal_tilt(100, a1)), 20000, 9, 1, kDefaultProposalBudget, &stats);
  const double sigma = static_cast<double>(solve_sigma(100, 1.0));
  const double predicted = 1 / std::sqrt(2 * std::numbers::pi * B_N_squared(100, sigma, 1.0));
  const double ratio = stats.acceptance() / predicted;
  const bool ok = pvalue > 0.001 && ratio > 0.5 && ratio < 2;
  return {ok, "chi-square p-value " + fmt(pvalue) + ", acceptance " + fmt(stats.acceptance()) + " vs predicted " +
                  fmt(predicted)};
}

Outcome dynamics_consistency() {
  const int N = 100;
  const auto a = ParameterFunction::power(1.0, 1.0);
  SimulationConfig cfg(N, a);
  cfg.k = 2;
  cfg.events = 1000000;
  cfg.burnin = 100000;
  cfg.thin = 1000000;
  cfg.seed = 11;
  const auto run = simulate(cfg);
  const auto exact = group_count_distribution(N, a);
  const double tv = total_variation(run.nu_distribution(), exact.probability);
  return {tv < 0.03, "TV(Gillespie, exact) " + fmt(tv)};
}

Outcome extremes() {
  const auto a = ParameterFunction::power(1.0, 1.0);
  std::vector<double> gaps;
  for (int N : {20, 40, 80}) gaps.push_back(std::abs(smallest_at_least_probability(N, a, 2) - std::exp(-1.0)));
  const bool smallest_ok = strictly_decreasing(gaps) && gaps.back() < 0.05;

  const int N = 10000;
  const auto window = largest_group_window(N, 1.0, 0.2);
  const auto draws = sample_many(TiltedPoissonSpec(a, N, optimal_tilt(N, a)), 1000, 12);
  const auto stats = extreme_group_statistics(draws, 1.0, 0.2, 2);
  const double exact_cover = largest_window_probability(N, a, window);
  const bool window_ok = stats.window_coverage > 0.95;
  return {smallest_ok && window_ok,
          "|P(min>=2)-1/e| at N=20,40,80 " + list(gaps) + "; window (" + fmt(window.lower) + ", " +
              fmt(window.upper) + ") coverage " + fmt(stats.window_coverage) + " +- " +
              fmt(stats.window_coverage_se) + " (exact " + fmt(exact_cover) + ")"};
}

Outcome mean_scaling() {
  bool ok = true;
  std::string detail;
  const std::vector<double> Ns{500, 1000, 2000, 4000};
  for (double p : {1.0, 2.0}) {
    const auto a = ParameterFunction::power(1.0, p);
    const auto logc = log_partition_function(4000, a);
    std::vector<double> means;
    for (double N : Ns) {
      std::vector<double> prefix(logc.begin(), logc.begin() + static_cast<long>(N) + 1);
      means.push_back(mean_group_count(static_cast<int>(N), a, prefix));
    }
    const double slope = slope_of(Ns, means);
    const double ratio = mean_vs_saddle_check(1000000, AsymptoticProfile::make(p, 1)).ratio();
    ok = ok && std::abs(slope - p / (p + 1)) <= 0.03 && std::abs(ratio - 1) < 0.05;
    detail += "p=" + fmt(p) + " slope " + fmt(slope) + " (target " + fmt(p / (p + 1)) + ") ratio@1e6 " +
              fmt(ratio) + "; ";
  }
  detail.resize(detail.size() - 2);
  return {ok, detail};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"exact measure equivalence", exact_measure},
      {"khintchine identity", khintchine_identity},
      {"poisson summation", poisson_summation},
      {"delta and sigma expansions", expansions},
      {"partition function asymptotics", partition_function},
      {"local limit theorem", local_limit},
      {"central limit theorem", central_limit},
      {"sampler exactness", sampler_exactness},
      {"dynamics vs measure", dynamics_consistency},
      {"extremes", extremes},
      {"mean scaling", mean_scaling},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failed;
    std::printf("criterion %zu %s: %s (%s; %.1f s)\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first,
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failed;
}
