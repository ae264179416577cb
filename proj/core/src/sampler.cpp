#include "cfp/sampler.hpp"

#include "cfp/error.hpp"
#include "cfp/measure.hpp"
#include "cfp/numeric.hpp"
#include "cfp/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace cfp {

Assembly parse_assembly(std::string_view name) {
  if (name == "colored_linear_trees") return Assembly::colored_linear_trees;
  if (name == "rooted_linear_trees") return Assembly::rooted_linear_trees;
  if (name == "compositions") return Assembly::compositions;
  throw ConfigError("unknown preset '" + std::string(name) +
                    "' (expected colored_linear_trees, rooted_linear_trees or compositions)");
}

const char* to_string(Assembly assembly) {
  switch (assembly) {
    case Assembly::colored_linear_trees: return "colored_linear_trees";
    case Assembly::rooted_linear_trees: return "rooted_linear_trees";
    case Assembly::compositions: return "compositions";
  }
  return "?";
}

ParameterFunction assembly_preset(Assembly assembly, const Rational& q) {
  switch (assembly) {
    case Assembly::colored_linear_trees:
      if (q < 1) throw ConfigError("colored_linear_trees needs q >= 1 colors");
      return ParameterFunction::power_tilted(Rational(1), 1, q);
    case Assembly::rooted_linear_trees:
      if (q != 1) throw ConfigError("rooted_linear_trees takes no q");
      return ParameterFunction::power(Rational(1), 2);
    case Assembly::compositions:
      if (q != 1) throw ConfigError("compositions takes no q");
      return ParameterFunction::power(Rational(1), 1);
  }
  throw ConfigError("unknown preset");
}

TiltedPoissonSpec::TiltedPoissonSpec(const ParameterFunction& a, int N, double t) : N_(N), t_(t) {
  if (N < 1) throw ConfigError("sampler needs N >= 1");
  if (!(t > 0) || !std::isfinite(t)) throw ConfigError("tilt t must be positive");
  a.require_positive_through(N);
  lambda_.assign(static_cast<std::size_t>(N) + 1, 0.0);
  const double lt = std::log(t);
  CompensatedSum<double> total, mass, var;
  for (int k = 1; k <= N; ++k) {
    const double la = a.log_value(k);
    lambda_[k] = std::isfinite(la) ? std::exp(la + k * lt) : 0.0;
    total += lambda_[k];
    mass += k * lambda_[k];
    var += static_cast<double>(k) * k * lambda_[k];
  }
  Lambda_ = total.value();
  mass_mean_ = mass.value();
  mass_var_ = var.value();
  if (!(Lambda_ > 0) || !std::isfinite(Lambda_)) throw ModelError("Poisson means are degenerate at this tilt");
  size_cdf_.resize(static_cast<std::size_t>(N));
  CompensatedSum<double> run;
  for (int k = 1; k <= N; ++k) {
    run += lambda_[k];
    size_cdf_[k - 1] = run.value() / Lambda_;
  }
  size_cdf_.back() = 1.0;
  // Poisson(Lambda) CDF out to where the remaining mass is below 1e-17
  const double hi = Lambda_ + 12 * std::sqrt(Lambda_) + 40;
  CompensatedSum<double> acc;
  for (long m = 0; m <= static_cast<long>(hi); ++m) {
    const double lp = -Lambda_ + m * std::log(Lambda_) - std::lgamma(m + 1.0);
    acc += std::exp(lp);
    count_cdf_.push_back(acc.value());
  }
  count_cdf_.back() = std::max(count_cdf_.back(), 1.0);
}

long TiltedPoissonSpec::draw_count(Rng& rng) const {
  const double u = rng.uniform();
  const auto it = std::lower_bound(count_cdf_.begin(), count_cdf_.end(), u);
  return static_cast<long>(std::min<std::ptrdiff_t>(it - count_cdf_.begin(),
                                                    static_cast<std::ptrdiff_t>(count_cdf_.size()) - 1));
}

int TiltedPoissonSpec::draw_size(Rng& rng) const {
  const double u = rng.uniform();
  const auto it = std::lower_bound(size_cdf_.begin(), size_cdf_.end(), u);
  return static_cast<int>(it - size_cdf_.begin()) + 1;
}

namespace {

// One proposal; fills `sizes` and returns true iff they sum to N.
bool propose(const TiltedPoissonSpec& spec, Rng& rng, std::vector<int>& sizes) {
  sizes.clear();
  const long m = spec.draw_count(rng);
  long total = 0;
  for (long i = 0; i < m; ++i) {
    const int s = spec.draw_size(rng);
    total += s;
    if (total > spec.N()) return false;
    sizes.push_back(s);
  }
  return total == spec.N();
}

}  // namespace

double predicted_acceptance(const TiltedPoissonSpec& spec) {
  return 1.0 / std::sqrt(2 * std::numbers::pi * spec.mass_variance());
}

Partition sample_equilibrium(const TiltedPoissonSpec& spec, Rng& rng, std::uint64_t budget, SamplerStats* stats) {
  std::vector<int> sizes;
  for (std::uint64_t tries = 1; tries <= budget; ++tries) {
    const bool ok = propose(spec, rng, sizes);
    if (stats) {
      ++stats->proposals;
      if (ok) ++stats->accepted;
      stats->predicted_acceptance = predicted_acceptance(spec);
    }
    if (ok) return Partition::from_parts(sizes);
  }
  std::ostringstream msg;
  msg << "no acceptance within " << budget << " proposals (N = " << spec.N() << ", tilt " << spec.tilt()
      << ", predicted acceptance " << predicted_acceptance(spec);
  if (stats) msg << ", measured " << stats->acceptance();
  msg << ")";
  throw BudgetExhausted(msg.str());
}

std::vector<Partition> sample_many(const TiltedPoissonSpec& spec, std::size_t count, std::uint64_t seed,
                                   int threads, std::uint64_t budget, SamplerStats* stats) {
  constexpr std::size_t kChunk = 1024;
  const std::size_t chunks = (count + kChunk - 1) / kChunk;
  std::vector<Partition> out(count);
  std::vector<SamplerStats> per_chunk(chunks);
  parallel_for(chunks, threads, [&](std::size_t c) {
    Rng rng(seed, c);
    const std::size_t lo = c * kChunk, hi = std::min(count, lo + kChunk);
    for (std::size_t i = lo; i < hi; ++i) out[i] = sample_equilibrium(spec, rng, budget, &per_chunk[c]);
  });
  if (stats) {
    for (const auto& s : per_chunk) {
      stats->proposals += s.proposals;
      stats->accepted += s.accepted;
    }
    stats->predicted_acceptance = predicted_acceptance(spec);
  }
  return out;
}

double optimal_tilt(int N, const ParameterFunction& a) {
  return static_cast<double>(std::exp(-saddle_point(N, a)));
}

}  // namespace cfp
