#include "cfp_cli/cli.hpp"

#include "cfp/asymptotics.hpp"
#include "cfp/error.hpp"
#include "cfp/generator.hpp"
#include "cfp/gillespie.hpp"
#include "cfp/khintchine.hpp"
#include "cfp/measure.hpp"
#include "cfp/parallel.hpp"
#include "cfp/sampler.hpp"
#include "cfp/verification.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace cfp::cli {

namespace {

using nlohmann::json;

constexpr std::uint64_t kDefaultSeed = 20240601;
constexpr int kExactLogCnLimit = 20000;

// Writes to --out when given, else to the command's stdout.
void emit(const std::string& path, std::ostream& out, const std::function<void(std::ostream&)>& body) {
  if (path.empty() || path == "-") {
    body(out);
    return;
  }
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot open '" + path + "' for writing");
  body(f);
}

void emit_json(const std::string& path, std::ostream& out, json j) {
  j["schema"] = 1;
  emit(path, out, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
}

Arithmetic parse_mode(const std::string& m) {
  if (m == "rational") return Arithmetic::rational;
  if (m == "float" || m == "floating") return Arithmetic::floating;
  throw ConfigError("--mode must be rational or float");
}

CountMethod parse_method(const std::string& m) {
  if (m == "auto") return CountMethod::automatic;
  if (m == "enumeration") return CountMethod::enumeration;
  if (m == "dp") return CountMethod::coefficient_dp;
  if (m == "root-of-unity") return CountMethod::root_of_unity;
  throw ConfigError("--method must be auto, enumeration, dp or root-of-unity");
}

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

struct Common {
  int threads = 1;
  std::string out;
};

int resolved_threads(const Common& c) { return thread_count(c.threads); }

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"cfp-lab: coagulation-fragmentation equilibrium toolkit", "cfp-lab"};
  app.require_subcommand(1, 1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  std::function<void()> action;
  Common common;
  auto add_common = [&](CLI::App* sub, bool with_out) {
    sub->add_option("--threads", common.threads, "Worker threads (CFP_LAB_THREADS overrides)")
        ->check(CLI::PositiveNumber);
    if (with_out) sub->add_option("--out", common.out, "Output file (default stdout)");
  };

  int N = 0;
  std::string a_spec, mode = "float";

  // enumerate
  auto* en = app.add_subcommand("enumerate", "List every partition of N with its equilibrium probability");
  en->add_option("--N", N, "Total mass")->required()->check(CLI::Range(0, 400));
  en->add_option("--a", a_spec, "Parameter function, e.g. power:p=1,q=1")->required();
  en->add_option("--mode", mode, "rational or float");
  int guard = kEnumerationGuard;
  en->add_option("--guard", guard, "Enumeration size guard");
  add_common(en, true);
  en->callback([&] {
    action = [&] {
      const auto a = ParameterFunction::parse(a_spec);
      const auto m = parse_mode(mode);
      const auto mu = invariant_measure(N, a, m, guard);
      emit(common.out, out, [&](std::ostream& os) {
        os << "partition,nu,probability" << (m == Arithmetic::rational ? ",exact" : "") << '\n';
        for (std::size_t i = 0; i < mu.size(); ++i) {
          os << mu.support[i].to_string() << ',' << mu.support[i].group_count() << ','
             << format_double(mu.probability[i]);
          if (m == Arithmetic::rational) os << ',' << to_string(mu.exact[i]);
          os << '\n';
        }
      });
    };
  });

  // exact-dist
  std::string method = "auto";
  auto* ed = app.add_subcommand("exact-dist", "Exact law of the number of groups");
  ed->add_option("--N", N, "Total mass")->required()->check(CLI::PositiveNumber);
  ed->add_option("--a", a_spec, "Parameter function")->required();
  ed->add_option("--mode", mode, "rational or float");
  ed->add_option("--method", method, "auto, enumeration, dp or root-of-unity");
  add_common(ed, true);
  ed->callback([&] {
    action = [&] {
      const auto a = ParameterFunction::parse(a_spec);
      CountOptions opt;
      opt.mode = parse_mode(mode);
      opt.method = parse_method(method);
      opt.threads = resolved_threads(common);
      const auto dist = group_count_distribution(N, a, opt);
      emit(common.out, out, [&](std::ostream& os) {
        const bool exact = !dist.exact.empty();
        os << "n,probability" << (exact ? ",exact" : "") << '\n';
        for (std::size_t i = 0; i < dist.size(); ++i) {
          os << dist.support[i] << ',' << format_double(dist.probability[i]);
          if (exact) os << ',' << to_string(dist.exact[i]);
          os << '\n';
        }
      });
    };
  });

  // khintchine
  long n_groups = 0;
  std::string delta_text = "auto";
  auto* kh = app.add_subcommand("khintchine", "Khintchine representation of P(nu_N = n)");
  kh->add_option("--N", N, "Total mass")->required()->check(CLI::PositiveNumber);
  kh->add_option("--n", n_groups, "Number of groups")->required()->check(CLI::PositiveNumber);
  kh->add_option("--a", a_spec, "Parameter function")->required();
  kh->add_option("--delta", delta_text, "auto or a positive value");
  add_common(kh, true);
  kh->callback([&] {
    action = [&] {
      if (n_groups > N) throw ConfigError("--n must not exceed --N");
      const auto a = ParameterFunction::parse(a_spec);
      long double delta = 0;
      if (delta_text == "auto") {
        delta = solve_delta(n_groups, N, a);
      } else {
        try {
          delta = std::stold(delta_text);
        } catch (const std::exception&) {
          throw ConfigError("--delta must be auto or a number");
        }
        if (!(delta > delta_floor(a))) throw ConfigError("--delta is outside the convergence region");
      }
      const TiltedVariable tv(a, delta);
      const auto mom = tv.moments(n_groups);
      const auto mass = sum_pmf(n_groups, tv, N);
      json j = {{"N", N},
                {"n", n_groups},
                {"a", a.describe()},
                {"delta", static_cast<double>(delta)},
                {"S", static_cast<double>(tv.S())},
                {"M1", static_cast<double>(mom.M1)},
                {"M2", static_cast<double>(mom.M2)},
                {"M3", static_cast<double>(mom.M3)},
                {"P_T_equals_N", static_cast<double>(mass.probability)},
                {"log_P_T_equals_N", static_cast<double>(mass.log_probability)},
                {"P_nu_equals_n", representation_probability(n_groups, N, delta, a)}};
      emit_json(common.out, out, j);
    };
  });

  // asymptotics
  double p = 1, q = 1;
  auto* as = app.add_subcommand("asymptotics", "Asymptotic constants, saddle point and log c_N");
  as->add_option("--p", p, "Exponent p > 0")->required();
  as->add_option("--q", q, "Scale q > 0");
  as->add_option("--N", N, "Total mass")->required()->check(CLI::PositiveNumber);
  add_common(as, true);
  as->callback([&] {
    action = [&] {
      const auto pr = AsymptoticProfile::make(p, q);
      const long double sigma = solve_sigma(N, p, q);
      json j = {{"N", N},
                {"p", p},
                {"q", q},
                {"A_p", pr.A_p},
                {"A_p1", pr.A_p1},
                {"Q_p", pr.Q_p},
                {"d_p", pr.d_p},
                {"Q_tilde", pr.Q_tilde},
                {"d_tilde", pr.d_tilde},
                {"sigma_N", static_cast<double>(sigma)},
                {"sigma_expansion", sigma_expansion(N, pr)},
                {"B_N_squared", B_N_squared(N, static_cast<double>(sigma), p, q)},
                {"log_cN_saddle", log_cN_saddle(N, p, q)}};
      if (q == 1) {
        j["h1"] = pr.h1;
        j["h2"] = pr.h2;
        j["h3"] = pr.h3;
        j["log_cN_closed"] = log_cN_closed(N, pr);
      }
      if (N <= kExactLogCnLimit) {
        j["log_cN_exact"] = log_partition_function(N, ParameterFunction::power(q, p))[N];
      } else {
        j["log_cN_exact"] = nullptr;
      }
      emit_json(common.out, out, j);
    };
  });

  // simulate
  int k = 2, trajectories = 1;
  long events = 10000, burnin = 1000, thin = 1;
  std::uint64_t seed = kDefaultSeed;
  std::string normalization = "unit_fragmentation";
  auto* si = app.add_subcommand("simulate", "Gillespie simulation of the k-CFP");
  si->add_option("--N", N, "Total mass")->required()->check(CLI::PositiveNumber);
  si->add_option("--p", p, "Exponent p > 0");
  si->add_option("--q", q, "Scale q > 0");
  si->add_option("--a", a_spec, "Parameter function (overrides --p/--q)");
  si->add_option("--k", k, "Maximal interaction order")->check(CLI::Range(2, 64));
  si->add_option("--trajectories", trajectories, "Independent trajectories")->check(CLI::PositiveNumber);
  si->add_option("--events", events, "Recorded events per trajectory")->check(CLI::NonNegativeNumber);
  si->add_option("--burnin", burnin, "Discarded events per trajectory")->check(CLI::NonNegativeNumber);
  si->add_option("--thin", thin, "Record every thin-th event")->check(CLI::PositiveNumber);
  si->add_option("--normalization", normalization, "unit_fragmentation or unit_coagulation");
  si->add_option("--seed", seed, "Master seed");
  add_common(si, true);
  si->callback([&] {
    action = [&] {
      const auto a = a_spec.empty() ? ParameterFunction::power(q, p) : ParameterFunction::parse(a_spec);
      SimulationConfig cfg(N, a);
      cfg.k = k;
      cfg.events = events;
      cfg.burnin = burnin;
      cfg.thin = thin;
      cfg.seed = seed;
      cfg.normalization = parse_normalization(normalization);
      err << "seed: " << seed << '\n';
      const auto runs = simulate_many(cfg, trajectories, resolved_threads(common));
      emit(common.out, out, [&](std::ostream& os) {
        os << "trajectory,event_index,time,nu,largest,smallest\n";
        for (std::size_t t = 0; t < runs.size(); ++t) {
          for (const auto& s : runs[t].samples) {
            os << t << ',' << s.event_index << ',' << format_double(s.time) << ',' << s.nu << ',' << s.largest
               << ',' << s.smallest << '\n';
          }
        }
      });
    };
  });

  // verify-stationary
  auto* vs = app.add_subcommand("verify-stationary", "Check detailed balance and the stationary law");
  vs->add_option("--N", N, "Total mass")->required()->check(CLI::Range(1, kEnumerationGuard));
  vs->add_option("--k", k, "Maximal interaction order")->check(CLI::Range(2, 64));
  vs->add_option("--a", a_spec, "Parameter function")->required();
  vs->add_option("--mode", mode, "rational or float");
  vs->add_option("--normalization", normalization, "unit_fragmentation or unit_coagulation");
  add_common(vs, true);
  vs->callback([&] {
    action = [&] {
      const auto a = ParameterFunction::parse(a_spec);
      const auto m = parse_mode(mode);
      if (m == Arithmetic::rational && !a.has_exact()) {
        throw ConfigError("rational mode needs an exact parameter function");
      }
      const RateSystem rs(a, k, parse_normalization(normalization));
      const auto g = Generator::build(N, rs);
      const auto balance = check_detailed_balance(g, rs);
      const auto pi = stationary_distribution(g, m);
      const auto mu = invariant_measure(N, a, m);
      json j = {{"N", N},
                {"k", k},
                {"a", a.describe()},
                {"mode", to_string(m)},
                {"states", g.size()},
                {"irreducible", g.irreducible()},
                {"pairs_checked", balance.pairs_checked},
                {"max_violation", balance.max_violation_float},
                {"tv_distance", total_variation(pi.probability, mu.probability)}};
      if (m == Arithmetic::rational) {
        j["max_violation_exact"] = to_string(balance.max_violation);
        j["stationary_equals_measure"] = pi.exact == mu.exact;
      }
      emit_json(common.out, out, j);
    };
  });

  // sample
  std::string preset;
  std::string q_text = "1";
  std::size_t count = 1000;
  double tilt = 0;
  std::uint64_t budget = kDefaultProposalBudget;
  auto* sa = app.add_subcommand("sample", "Exact equilibrium samples by conditioned Poisson rejection");
  sa->add_option("--N", N, "Total mass")->required()->check(CLI::PositiveNumber);
  auto* preset_opt = sa->add_option("--preset", preset,
                                    "colored_linear_trees, rooted_linear_trees or compositions");
  sa->add_option("--q", q_text, "Color count for colored_linear_trees");
  sa->add_option("--a", a_spec, "Parameter function")->excludes(preset_opt);
  sa->add_option("--count", count, "Accepted samples")->check(CLI::PositiveNumber);
  sa->add_option("--tilt", tilt, "Tilt t in (0,1); default is the saddle-point tilt");
  sa->add_option("--budget", budget, "Proposal budget per sample")->check(CLI::PositiveNumber);
  sa->add_option("--seed", seed, "Master seed");
  add_common(sa, true);
  sa->callback([&] {
    action = [&] {
      if (preset.empty() && a_spec.empty()) throw ConfigError("sample needs --preset or --a");
      const auto a = preset.empty() ? ParameterFunction::parse(a_spec)
                                    : assembly_preset(parse_assembly(preset), parse_rational(q_text));
      const double t = tilt > 0 ? tilt : optimal_tilt(N, a);
      const TiltedPoissonSpec spec(a, N, t);
      err << "seed: " << seed << '\n';
      SamplerStats stats;
      const auto draws = sample_many(spec, count, seed, resolved_threads(common), budget, &stats);
      err << "tilt: " << format_double(t) << " acceptance: " << format_double(stats.acceptance())
          << " predicted: " << format_double(stats.predicted_acceptance) << '\n';
      emit(common.out, out, [&](std::ostream& os) {
        os << "sample,nu,largest,smallest,partition\n";
        for (std::size_t i = 0; i < draws.size(); ++i) {
          os << i << ',' << draws[i].group_count() << ',' << draws[i].largest() << ',' << draws[i].smallest()
             << ',' << draws[i].to_string() << '\n';
        }
      });
    };
  });

  // verify
  std::string config_path, out_dir;
  auto* ve = app.add_subcommand("verify", "Run a convergence suite from a JSON config");
  ve->add_option("--config", config_path, "Config JSON")->required()->check(CLI::ExistingFile);
  ve->add_option("--out", out_dir, "Report directory (overrides the config)");
  ve->add_option("--threads", common.threads, "Worker threads")->check(CLI::PositiveNumber);
  ve->callback([&] {
    action = [&] {
      std::ifstream f(config_path);
      std::stringstream buf;
      buf << f.rdbuf();
      auto cfg = ExperimentConfig::from_json(buf.str());
      if (!out_dir.empty()) cfg.output = out_dir;
      cfg.threads = thread_count(std::max(cfg.threads, common.threads));
      if (cfg.mode == ExperimentMode::monte_carlo) err << "seed: " << cfg.seed << '\n';
      const auto report = run_suite(cfg);
      out << report.to_json() << '\n';
    };
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return user_error;
  }

  try {
    if (action) action();
    return ok;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
  } catch (const std::length_error& e) {
    err << "error: " << e.what() << '\n';
  } catch (const BudgetExhausted& e) {
    err << "error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return internal_error;
  }
  return user_error;
}

}  // namespace cfp::cli
