#include "cfp/verification.hpp"

#include "cfp/error.hpp"
#include "cfp/gillespie.hpp"
#include "cfp/numeric.hpp"
#include "cfp/parallel.hpp"
#include "cfp/random.hpp"
#include "cfp/sampler.hpp"

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

namespace cfp {

namespace {

using nlohmann::json;

const char* mode_name(ExperimentMode m) { return m == ExperimentMode::exact ? "exact" : "monte_carlo"; }
const char* source_name(MonteCarloSource s) { return s == MonteCarloSource::sampler ? "sampler" : "gillespie"; }

void moments_of(const std::vector<double>& prob, double& mean, double& var) {
  CompensatedSum<double> m1, m2;
  for (std::size_t i = 0; i < prob.size(); ++i) {
    const double n = static_cast<double>(i + 1);
    m1 += n * prob[i];
    m2 += n * n * prob[i];
  }
  mean = m1.value();
  var = std::max(0.0, m2.value() - mean * mean);
}

ComparisonRow exact_row(int N, const ExperimentConfig& cfg, const AsymptoticProfile& pr) {
  const auto a = ParameterFunction::power(cfg.q, cfg.p);
  CountOptions opt;
  opt.threads = 1;
  const auto dist = group_count_distribution(N, a, opt);
  ComparisonRow row;
  row.N = N;
  row.oracle = dist.method == "root_of_unity" ? "root_of_unity" : "exact_dp";
  row.probability = dist.probability;
  moments_of(row.probability, row.mean, row.variance);
  row.ks = clt_distance(N, pr, dist);
  row.llt = llt_error(N, pr, dist);
  return row;
}

ComparisonRow sampler_row(int N, const ExperimentConfig& cfg, const AsymptoticProfile& pr) {
  const auto a = ParameterFunction::power(cfg.q, cfg.p);
  const TiltedPoissonSpec spec(a, N, optimal_tilt(N, a));
  const auto draws = sample_many(spec, cfg.sample_budget, derive_seed(cfg.seed, static_cast<std::uint64_t>(N)), 1);
  ComparisonRow row;
  row.N = N;
  row.oracle = "rejection_sampler";
  row.samples = draws.size();
  row.probability.assign(static_cast<std::size_t>(N), 0.0);
  for (const auto& eta : draws) row.probability[eta.group_count() - 1] += 1;
  for (auto& v : row.probability) v /= static_cast<double>(draws.size());
  moments_of(row.probability, row.mean, row.variance);
  row.mean_standard_error = std::sqrt(row.variance / static_cast<double>(draws.size()));
  row.ks = clt_distance(N, pr, row.probability);
  return row;
}

ComparisonRow gillespie_row(int N, const ExperimentConfig& cfg, const AsymptoticProfile& pr) {
  SimulationConfig sc(N, ParameterFunction::power(cfg.q, cfg.p));
  sc.k = cfg.k;
  sc.events = static_cast<long>(cfg.sample_budget);
  sc.burnin = static_cast<long>(cfg.sample_budget / 10);
  sc.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(N));
  sc.thin = 1;
  const auto run = simulate(sc);
  ComparisonRow row;
  row.N = N;
  row.oracle = "gillespie";
  row.samples = static_cast<std::uint64_t>(run.events);
  row.probability = run.nu_distribution();
  moments_of(row.probability, row.mean, row.variance);
  // time-weighted batch means over 20 equal stretches of observed time
  constexpr int kBatches = 20;
  std::vector<double> num(kBatches, 0.0), den(kBatches, 0.0);
  for (std::size_t i = 0; i + 1 < run.samples.size(); ++i) {
    const auto& s = run.samples[i];
    const double held = run.samples[i + 1].time - s.time;
    const int b = std::min(kBatches - 1, static_cast<int>(kBatches * s.time / run.observed_time));
    num[b] += held * s.nu;
    den[b] += held;
  }
  std::vector<double> means;
  for (int b = 0; b < kBatches; ++b) {
    if (den[b] > 0) means.push_back(num[b] / den[b]);
  }
  if (means.size() > 1) {
    double m = 0, v = 0;
    for (double x : means) m += x;
    m /= static_cast<double>(means.size());
    for (double x : means) v += (x - m) * (x - m);
    v /= static_cast<double>(means.size() - 1);
    row.mean_standard_error = std::sqrt(v / static_cast<double>(means.size()));
  }
  row.ks = clt_distance(N, pr, row.probability);
  return row;
}

json row_json(const ComparisonRow& r) {
  json j = {{"N", r.N},           {"oracle", r.oracle},
            {"mean", r.mean},     {"variance", r.variance},
            {"predicted_mean", r.predicted_mean}, {"predicted_variance", r.predicted_variance},
            {"ks", r.ks},         {"samples", r.samples}};
  if (r.llt >= 0) j["llt"] = r.llt;
  if (r.oracle == "rejection_sampler" || r.oracle == "gillespie") j["mean_standard_error"] = r.mean_standard_error;
  return j;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (N_grid.empty()) throw ConfigError("N_grid must not be empty");
  for (std::size_t i = 0; i < N_grid.size(); ++i) {
    if (N_grid[i] < 1) throw ConfigError("N_grid entries must be positive");
    if (i > 0 && N_grid[i] <= N_grid[i - 1]) throw ConfigError("N_grid must be strictly increasing");
  }
  if (!(p > 0) || !(q > 0)) throw ConfigError("p and q must be positive");
  if (k < 2) throw ConfigError("k must be at least 2");
  if (sample_budget == 0) throw ConfigError("sample_budget must be positive");
  if (threads < 1) throw ConfigError("threads must be positive");
}

ExperimentConfig ExperimentConfig::from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> known{"N_grid", "p", "q", "k", "mode", "source", "sample_budget",
                                           "seed", "tolerances", "output", "threads", "schema"};
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!known.count(key)) throw ConfigError("unknown config key '" + key + "'");
  }
  ExperimentConfig c;
  try {
    if (j.contains("N_grid")) c.N_grid = j.at("N_grid").get<std::vector<int>>();
    if (j.contains("p")) c.p = j.at("p").get<double>();
    if (j.contains("q")) c.q = j.at("q").get<double>();
    if (j.contains("k")) c.k = j.at("k").get<int>();
    if (j.contains("mode")) {
      const auto m = j.at("mode").get<std::string>();
      if (m == "exact") {
        c.mode = ExperimentMode::exact;
      } else if (m == "monte_carlo") {
        c.mode = ExperimentMode::monte_carlo;
      } else {
        throw ConfigError("mode must be exact or monte_carlo");
      }
    }
    if (j.contains("source")) {
      const auto s = j.at("source").get<std::string>();
      if (s == "sampler") {
        c.source = MonteCarloSource::sampler;
      } else if (s == "gillespie") {
        c.source = MonteCarloSource::gillespie;
      } else {
        throw ConfigError("source must be sampler or gillespie");
      }
    }
    if (j.contains("sample_budget")) {
      const auto b = j.at("sample_budget").get<long long>();
      if (b <= 0) throw ConfigError("sample_budget must be positive");
      c.sample_budget = static_cast<std::uint64_t>(b);
    }
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("output")) c.output = j.at("output").get<std::string>();
    if (j.contains("threads")) c.threads = j.at("threads").get<int>();
    if (j.contains("tolerances")) {
      const auto& t = j.at("tolerances");
      if (!t.is_object()) throw ConfigError("tolerances must be an object");
      for (const auto& [key, value] : t.items()) {
        const double v = value.get<double>();
        if (key == "llt") {
          c.tolerances.llt = v;
        } else if (key == "ks") {
          c.tolerances.ks = v;
        } else if (key == "slope") {
          c.tolerances.slope = v;
        } else if (key == "mc_sigmas") {
          c.tolerances.mc_sigmas = v;
        } else {
          throw ConfigError("unknown tolerance '" + key + "'");
        }
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  c.validate();
  return c;
}

std::string ExperimentConfig::to_json() const {
  json j = {{"N_grid", N_grid},
            {"p", p},
            {"q", q},
            {"k", k},
            {"mode", mode_name(mode)},
            {"source", source_name(source)},
            {"sample_budget", sample_budget},
            {"seed", seed},
            {"output", output},
            {"threads", threads},
            {"tolerances",
             {{"llt", tolerances.llt}, {"ks", tolerances.ks}, {"slope", tolerances.slope},
              {"mc_sigmas", tolerances.mc_sigmas}}}};
  return j.dump(2);
}

double llt_error(int N, const AsymptoticProfile& pr, const GroupCountDistribution& dist, double window) {
  double worst = 0;
  bool any = false;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    const double n = dist.support[i];
    const double s = pr.s_of_n(n, N);
    if (std::abs(s) > window) continue;
    const double f = local_limit_density(N, s, pr);
    worst = std::max(worst, std::abs(dist.probability[i] / f - 1));
    any = true;
  }
  if (!any) throw ConfigError("no lattice point falls in the LLT window");
  return worst;
}

double clt_distance(int N, const AsymptoticProfile& pr, const std::vector<double>& prob) {
  if (static_cast<int>(prob.size()) != N) throw ConfigError("law must cover n = 1..N");
  const double c = pr.center(N), sc = pr.scale(N);
  double F = 0, worst = std::abs(normal_cdf((0.5 - c) / sc));
  for (int n = 1; n <= N; ++n) {
    F += prob[n - 1];
    worst = std::max(worst, std::abs(F - normal_cdf((n + 0.5 - c) / sc)));
  }
  return worst;
}

double clt_distance(int N, const AsymptoticProfile& pr, const GroupCountDistribution& dist) {
  return clt_distance(N, pr, dist.probability);
}

bool non_increasing(const std::vector<double>& v, double slack) {
  int inversions = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[i - 1]) {
      if (v[i] - v[i - 1] > slack) return false;
      ++inversions;
    }
  }
  return inversions <= (slack > 0 ? 1 : 0);
}

std::string ComparisonReport::to_json() const {
  json rows_json = json::array();
  std::vector<double> llts, kss;
  for (const auto& r : rows) rows_json.push_back(row_json(r));
  json j = {{"schema", 1},
            {"config", json::parse(config.to_json())},
            {"rows", rows_json},
            {"mean_slope", mean_slope},
            {"variance_slope", variance_slope},
            {"expected_slope", config.p / (config.p + 1)},
            {"llt_non_increasing", llt_non_increasing},
            {"ks_non_increasing", ks_non_increasing}};
  return j.dump(2);
}

ComparisonReport run_suite(const ExperimentConfig& config) {
  config.validate();
  const auto pr = AsymptoticProfile::make(config.p, config.q);
  ComparisonReport rep;
  rep.config = config;
  rep.rows.resize(config.N_grid.size());
  parallel_for(config.N_grid.size(), config.threads, [&](std::size_t i) {
    const int N = config.N_grid[i];
    ComparisonRow row;
    if (config.mode == ExperimentMode::exact) {
      row = exact_row(N, config, pr);
    } else if (config.source == MonteCarloSource::sampler) {
      row = sampler_row(N, config, pr);
    } else {
      row = gillespie_row(N, config, pr);
    }
    const double scale = std::pow(static_cast<double>(N), pr.mass_exponent());
    row.predicted_mean = pr.Q_tilde * scale;
    row.predicted_variance = pr.d_tilde * scale;
    rep.rows[i] = std::move(row);
  });
  if (rep.rows.size() >= 2) {
    std::vector<double> x, ym, yv, llt, ks;
    for (const auto& r : rep.rows) {
      x.push_back(std::log(static_cast<double>(r.N)));
      ym.push_back(std::log(r.mean));
      yv.push_back(std::log(std::max(r.variance, 1e-300)));
      llt.push_back(r.llt);
      ks.push_back(r.ks);
    }
    rep.mean_slope = fitted_slope(x, ym);
    rep.variance_slope = fitted_slope(x, yv);
    double slack = 0;
    for (const auto& r : rep.rows) slack = std::max(slack, 2 * r.mean_standard_error / std::max(r.mean, 1.0));
    rep.llt_non_increasing = config.mode == ExperimentMode::exact && non_increasing(llt);
    rep.ks_non_increasing = non_increasing(ks, slack);
  }

  if (!config.output.empty()) {
    namespace fs = std::filesystem;
    fs::create_directories(config.output);
    std::ofstream(fs::path(config.output) / "report.json") << rep.to_json() << "\n";
    for (const auto& r : rep.rows) {
      std::ofstream csv(fs::path(config.output) / ("nu_N" + std::to_string(r.N) + ".csv"));
      csv.precision(17);
      csv << "n,probability,s,llt_density\n";
      for (int n = 1; n <= r.N; ++n) {
        const double s = pr.s_of_n(n, r.N);
        csv << n << ',' << r.probability[n - 1] << ',' << s << ',' << local_limit_density(r.N, s, pr) << '\n';
      }
    }
  }
  return rep;
}

}  // namespace cfp
