#include "cfp/gillespie.hpp"

#include "cfp/error.hpp"
#include "cfp/parallel.hpp"
#include "cfp/random.hpp"

#include <algorithm>
#include <cmath>

namespace cfp {

std::vector<double> TrajectorySummary::nu_distribution() const {
  std::vector<double> out(nu_occupation.empty() ? 0 : nu_occupation.size() - 1, 0.0);
  double total = 0;
  for (double v : nu_occupation) total += v;
  if (total <= 0) return out;
  for (std::size_t n = 1; n < nu_occupation.size(); ++n) out[n - 1] = nu_occupation[n] / total;
  return out;
}

namespace {

class Fenwick {
 public:
  explicit Fenwick(std::size_t n) : tree_(n + 1, 0.0) {}
  void add(std::size_t i, double delta) {  // 1-based
    for (; i < tree_.size(); i += i & (~i + 1)) tree_[i] += delta;
  }
  void assign(const std::vector<double>& values) {  // values[0] unused
    std::fill(tree_.begin(), tree_.end(), 0.0);
    for (std::size_t i = 1; i < tree_.size(); ++i) {
      tree_[i] += values[i];
      const std::size_t j = i + (i & (~i + 1));
      if (j < tree_.size()) tree_[j] += tree_[i];
    }
  }
  double total() const {
    double s = 0;
    for (std::size_t i = tree_.size() - 1; i > 0; i -= i & (~i + 1)) s += tree_[i];
    return s;
  }
  /// Smallest i with prefix(i) > u.
  std::size_t find(double u) const {
    std::size_t pos = 0, step = 1;
    while (step * 2 < tree_.size()) step *= 2;
    for (; step > 0; step /= 2) {
      if (pos + step < tree_.size() && tree_[pos + step] <= u) {
        pos += step;
        u -= tree_[pos];
      }
    }
    return pos + 1;
  }

 private:
  std::vector<double> tree_;
};

class Engine {
 public:
  explicit Engine(const SimulationConfig& cfg)
      : cfg_(cfg), N_(cfg.N), k_(cfg.k), unit_frag_(cfg.normalization == RateNormalization::unit_fragmentation),
        rng_(cfg.seed, cfg.stream), fen_(2 * static_cast<std::size_t>(cfg.N)) {
    if (N_ < 1) throw ConfigError("simulation needs N >= 1");
    if (k_ < 2) throw ConfigError("interaction order k must be at least 2");
    cfg.a.require_positive_through(N_);
    lp_.assign(static_cast<std::size_t>(N_) + 1, 0.0);
    for (int j = 1; j <= N_; ++j) lp_[j] = cfg.a.log_value(j);
    n_.assign(static_cast<std::size_t>(N_) + 1, 0);
    const Partition init = cfg.initial ? *cfg.initial : Partition::singletons(N_);
    if (init.total() != N_) throw ConfigError("initial partition does not have total N");
    for (const auto& [size, count] : init.blocks()) {
      n_[size] = count;
      present_.push_back(size);
    }
    std::sort(present_.begin(), present_.end());
    groups_ = init.group_count();

    // p(m, s): partitions of m into exactly s parts, s <= k
    const int kk = std::min(k_, N_);
    parts_.assign(static_cast<std::size_t>(N_) + 1, std::vector<double>(static_cast<std::size_t>(kk) + 1, 0.0));
    parts_[0][0] = 1;
    for (int m = 1; m <= N_; ++m) {
      for (int s = 1; s <= std::min(m, kk); ++s) {
        parts_[m][s] = parts_[m - 1][s - 1] + (m - s >= s ? parts_[m - s][s] : 0.0);
      }
    }
    F_.assign(static_cast<std::size_t>(N_) + 1, 0.0);
    for (int m = 2; m <= N_; ++m) {
      if (unit_frag_) {
        for (int s = 2; s <= std::min(m, kk); ++s) F_[m] += parts_[m][s];
      } else {
        F_[m] = frag_table(m).second.back();
      }
    }
    coag_.assign(static_cast<std::size_t>(N_) + 1, 0.0);
    rebuild();
  }

  double total_rate() const { return fen_.total(); }
  int groups() const { return groups_; }
  int largest() const { return present_.back(); }
  int smallest() const { return present_.front(); }

  Partition state() const {
    std::vector<std::pair<int, int>> counts;
    for (int s : present_) counts.emplace_back(s, n_[s]);
    return Partition::from_counts(std::move(counts));
  }

  void rebuild() {
    std::vector<double> values(2 * static_cast<std::size_t>(N_) + 1, 0.0);
    std::fill(coag_.begin(), coag_.end(), 0.0);
    for (int i : present_) {
      coag_[i] = class_rate(i);
      values[i] = coag_[i];
      values[N_ + i] = n_[i] * F_[i];
    }
    fen_.assign(values);
  }

  Rng& rng() { return rng_; }

  /// Draws and applies one event given the current total rate.
  void step(double total) {
    const double u = rng_.uniform() * total;
    std::size_t cls = std::min<std::size_t>(fen_.find(u), 2 * static_cast<std::size_t>(N_));
    if (!class_positive(cls)) cls = fallback_class();
    if (cls <= static_cast<std::size_t>(N_)) {
      coagulate(static_cast<int>(cls));
    } else {
      fragment(static_cast<int>(cls) - N_);
    }
  }

 private:
  double psi_log(int mass, double log_parts) const { return unit_frag_ ? std::exp(lp_[mass] - log_parts) : 1.0; }
  double psi2(int i, int j) const {
    if (i + j > N_) return 0.0;
    return unit_frag_ ? std::exp(lp_[i + j] - lp_[i] - lp_[j]) : 1.0;
  }

  bool class_positive(std::size_t cls) const {
    if (cls <= static_cast<std::size_t>(N_)) return coag_[cls] > 0;
    const int m = static_cast<int>(cls) - N_;
    return n_[m] > 0 && F_[m] > 0;
  }

  std::size_t fallback_class() const {
    // rounding in the tree can land on an empty class; take the last live one
    std::size_t best = 0;
    for (int i : present_) {
      if (coag_[i] > 0) best = std::max<std::size_t>(best, i);
      if (F_[i] > 0) best = std::max<std::size_t>(best, N_ + i);
    }
    if (best == 0) throw std::logic_error("event drawn in an absorbing state");
    return best;
  }

  // Visits every coagulation tuple of order 2..k whose smallest entry is i,
  // with its total rate.
  template <class Visit>
  void visit_tuples(int i, Visit&& visit) const {
    std::vector<int> sizes{i};
    const auto start = std::lower_bound(present_.begin(), present_.end(), i) - present_.begin();
    // factor for the first copy of i
    recurse(sizes, static_cast<std::size_t>(start), 1, static_cast<double>(n_[i]), i, lp_[i], visit);
  }

  template <class Visit>
  void recurse(std::vector<int>& sizes, std::size_t pos, int used_here, double mult, int mass, double log_parts,
               Visit& visit) const {
    if (static_cast<int>(sizes.size()) >= 2) visit(sizes, mult * psi_log(mass, log_parts));
    if (static_cast<int>(sizes.size()) == k_) return;
    for (std::size_t q = pos; q < present_.size(); ++q) {
      const int s = present_[q];
      const int used = q == pos ? used_here : 0;
      if (n_[s] - used <= 0) continue;
      if (mass + s > N_) break;
      sizes.push_back(s);
      recurse(sizes, q, used + 1, mult * (n_[s] - used), mass + s, log_parts + lp_[s], visit);
      sizes.pop_back();
    }
  }

  double class_rate(int i) const {
    if (n_[i] == 0) return 0.0;
    if (k_ == 2) {
      double s = (n_[i] - 1) * psi2(i, i);
      for (auto it = std::upper_bound(present_.begin(), present_.end(), i); it != present_.end(); ++it) {
        s += n_[*it] * psi2(i, *it);
      }
      return n_[i] * s;
    }
    double s = 0;
    visit_tuples(i, [&](const std::vector<int>&, double r) { s += r; });
    return s;
  }

  void set_coag(int i, double v) {
    fen_.add(static_cast<std::size_t>(i), v - coag_[i]);
    coag_[i] = v;
  }

  void set_frag_count(int m, int old_count) {
    fen_.add(static_cast<std::size_t>(N_ + m), (n_[m] - old_count) * F_[m]);
  }

  // One unit change of n_t; keeps the k = 2 pair classes exact incrementally.
  void change(int t, int delta) {
    if (k_ == 2) {
      const double d = static_cast<double>(delta);
      for (int i : present_) {
        if (i >= t) break;
        set_coag(i, coag_[i] + n_[i] * d * psi2(i, t));
      }
    }
    const int old = n_[t];
    n_[t] += delta;
    groups_ += delta;
    if (old == 0) present_.insert(std::lower_bound(present_.begin(), present_.end(), t), t);
    if (n_[t] == 0) present_.erase(std::lower_bound(present_.begin(), present_.end(), t));
    set_frag_count(t, old);
    if (k_ == 2) set_coag(t, class_rate(t));
  }

  void refresh_after(int max_touched) {
    if (k_ == 2) return;
    for (int i = 1; i <= max_touched; ++i) {
      if (coag_[i] != 0 || n_[i] > 0) set_coag(i, class_rate(i));
    }
  }

  void coagulate(int i) {
    std::vector<int> chosen;
    if (k_ == 2) {
      double u = rng_.uniform() * coag_[i];
      int j = i;
      double w = n_[i] * (n_[i] - 1) * psi2(i, i);
      if (!(u < w) || w == 0) {
        u -= w;
        j = -1;
        for (auto it = std::upper_bound(present_.begin(), present_.end(), i); it != present_.end(); ++it) {
          w = n_[i] * n_[*it] * psi2(i, *it);
          j = *it;
          if (u < w) break;
          u -= w;
        }
        if (j < 0) j = i;
      }
      chosen = {i, j};
    } else {
      double u = rng_.uniform() * coag_[i];
      bool done = false;
      visit_tuples(i, [&](const std::vector<int>& sizes, double r) {
        if (done) return;
        chosen = sizes;
        if (u < r) {
          done = true;
        } else {
          u -= r;
        }
      });
    }
    int mass = 0, top = 0;
    for (int s : chosen) {
      change(s, -1);
      mass += s;
      top = std::max(top, s);
    }
    change(mass, +1);
    refresh_after(std::max(top, mass));
  }

  std::pair<std::vector<InteractionTuple>, std::vector<double>>& frag_table(int m) {
    auto it = frag_cache_.find(m);
    if (it != frag_cache_.end()) return it->second;
    auto tuples = fragmentation_tuples(m, k_);
    std::vector<double> cum;
    double s = 0;
    for (const auto& J : tuples) {
      double lw = -lp_[m];
      for (int j : J.sizes()) lw += lp_[j];
      s += unit_frag_ ? 1.0 : std::exp(lw);
      cum.push_back(s);
    }
    return frag_cache_.emplace(m, std::make_pair(std::move(tuples), std::move(cum))).first->second;
  }

  // uniform partition of m into exactly s parts, by the smallest-part recursion
  std::vector<int> uniform_split(int m, int s) {
    std::vector<int> parts;
    int offset = 0;  // added to every remaining part
    while (s > 0) {
      const double with_one = parts_[m - 1][s - 1];
      const double total = parts_[m][s];
      if (m - s < s || rng_.uniform() * total < with_one) {
        parts.push_back(1 + offset);
        --m;
        --s;
      } else {
        m -= s;
        ++offset;
      }
    }
    return parts;
  }

  void fragment(int m) {
    std::vector<int> parts;
    if (unit_frag_) {
      if (k_ == 2) {
        const int i = 1 + static_cast<int>(rng_.below(static_cast<std::uint64_t>(m / 2)));
        parts = {i, m - i};
      } else {
        double u = rng_.uniform() * F_[m];
        int s = 2;
        const int kk = std::min(k_, m);
        for (; s < kk; ++s) {
          if (u < parts_[m][s]) break;
          u -= parts_[m][s];
        }
        parts = uniform_split(m, s);
      }
    } else {
      auto& [tuples, cum] = frag_table(m);
      const double u = rng_.uniform() * cum.back();
      const auto idx = std::min<std::size_t>(std::upper_bound(cum.begin(), cum.end(), u) - cum.begin(),
                                             tuples.size() - 1);
      parts = tuples[idx].sizes();
    }
    change(m, -1);
    for (int s : parts) change(s, +1);
    refresh_after(m);
  }

  const SimulationConfig& cfg_;
  int N_, k_;
  bool unit_frag_;
  Rng rng_;
  Fenwick fen_;
  std::vector<double> lp_;
  std::vector<int> n_;
  std::vector<int> present_;
  int groups_ = 0;
  std::vector<std::vector<double>> parts_;
  std::vector<double> F_;
  std::vector<double> coag_;
  std::map<int, std::pair<std::vector<InteractionTuple>, std::vector<double>>> frag_cache_;
};

}  // namespace

TrajectorySummary simulate(const SimulationConfig& cfg) {
  if (cfg.events < 0 || cfg.burnin < 0 || cfg.thin < 0) throw ConfigError("event counts must be non-negative");
  if (cfg.rebuild_interval < 1) throw ConfigError("rebuild interval must be positive");
  Engine eng(cfg);
  TrajectorySummary out;
  out.nu_occupation.assign(static_cast<std::size_t>(cfg.N) + 1, 0.0);

  double time = 0, recorded_from = 0;
  long recorded = 0, total = 0;
  auto sample = [&](long index) {
    if (cfg.thin > 0 && index % cfg.thin == 0) {
      out.samples.push_back({index, time - recorded_from, eng.groups(), eng.largest(), eng.smallest()});
    }
  };
  if (cfg.burnin == 0) sample(0);

  const long budget = cfg.burnin + cfg.events;
  while (total < budget) {
    const double rate = eng.total_rate();
    const bool absorbing = !(rate > 0);
    const double dt = absorbing ? std::numeric_limits<double>::infinity() : eng.rng().exponential(rate);
    const bool after_burnin = total >= cfg.burnin;
    const bool timed_out = time + dt > cfg.max_time;
    if (after_burnin) {
      const double held = timed_out ? cfg.max_time - time : dt;
      if (std::isfinite(held)) {
        out.nu_occupation[eng.groups()] += held;
        if (cfg.track_states) out.state_occupation[eng.state()] += held;
      } else {
        // absorbing state: the whole future is spent here
        out.nu_occupation[eng.groups()] += 1.0;
        if (cfg.track_states) out.state_occupation[eng.state()] += 1.0;
      }
    }
    if (absorbing || timed_out) {
      if (std::isfinite(cfg.max_time) && cfg.max_time > time) time = cfg.max_time;
      break;
    }
    time += dt;
    eng.step(rate);
    ++total;
    if (total % cfg.rebuild_interval == 0) eng.rebuild();
    if (total == cfg.burnin) {
      recorded_from = time;
      sample(0);
    } else if (total > cfg.burnin) {
      ++recorded;
      sample(recorded);
    }
  }
  out.final_state = eng.state();
  out.events = recorded;
  out.total_events = total;
  out.observed_time = std::max(0.0, time - recorded_from);
  return out;
}

std::vector<TrajectorySummary> simulate_many(const SimulationConfig& config, int trajectories, int threads) {
  if (trajectories < 1) throw ConfigError("need at least one trajectory");
  std::vector<std::optional<TrajectorySummary>> slots(static_cast<std::size_t>(trajectories));
  parallel_for(slots.size(), threads, [&](std::size_t i) {
    SimulationConfig c = config;
    c.stream = config.stream + i;
    slots[i] = simulate(c);
  });
  std::vector<TrajectorySummary> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace cfp
