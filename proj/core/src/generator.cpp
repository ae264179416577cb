#include "cfp/generator.hpp"

#include "cfp/error.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace cfp {

Generator Generator::build(int N, const RateSystem& rs, int guard) {
  if (N < 1) throw ConfigError("generator needs N >= 1");
  rs.weights().require_positive_through(N);
  Generator g;
  g.N_ = N;
  g.exact_ = rs.weights().has_exact();
  g.states_ = enumerate_partitions(N, guard);
  for (std::size_t i = 0; i < g.states_.size(); ++i) g.index_.emplace(g.states_[i], i);
  g.rows_.resize(g.states_.size());

  std::map<int, std::vector<InteractionTuple>> splits;
  for (std::size_t i = 0; i < g.states_.size(); ++i) {
    const Partition& eta = g.states_[i];
    std::map<std::size_t, std::pair<double, Rational>> acc;
    auto add = [&](const Partition& xi, double r, const Rational& re) {
      auto& slot = acc[g.index_.at(xi)];
      slot.first += r;
      if (g.exact_) slot.second += re;
    };
    for (const auto& J : coagulation_tuples(eta, rs.k())) {
      add(apply_coagulation(eta, J), total_coagulation_rate(eta, J, rs),
          g.exact_ ? total_coagulation_rate_exact(eta, J, rs) : Rational(0));
    }
    for (const auto& [size, count] : eta.blocks()) {
      (void)count;
      auto it = splits.find(size);
      if (it == splits.end()) it = splits.emplace(size, fragmentation_tuples(size, rs.k())).first;
      for (const auto& J : it->second) {
        add(apply_fragmentation(eta, J), total_fragmentation_rate(eta, J, rs),
            g.exact_ ? total_fragmentation_rate_exact(eta, J, rs) : Rational(0));
      }
    }
    for (auto& [to, r] : acc) g.rows_[i].push_back({to, r.first, r.second});
  }
  return g;
}

std::size_t Generator::index_of(const Partition& eta) const {
  const auto it = index_.find(eta);
  if (it == index_.end()) throw ConfigError("partition " + eta.to_string() + " is not in the state space");
  return it->second;
}

double Generator::rate(std::size_t i, std::size_t j) const {
  for (const auto& t : rows_[i]) {
    if (t.to == j) return t.rate;
  }
  return 0.0;
}

Rational Generator::rate_exact(std::size_t i, std::size_t j) const {
  if (!exact_) throw ModelError("generator has no exact rates");
  for (const auto& t : rows_[i]) {
    if (t.to == j) return t.exact;
  }
  return 0;
}

double Generator::exit_rate(std::size_t i) const {
  double s = 0;
  for (const auto& t : rows_[i]) s += t.rate;
  return s;
}

Rational Generator::exit_rate_exact(std::size_t i) const {
  if (!exact_) throw ModelError("generator has no exact rates");
  Rational s = 0;
  for (const auto& t : rows_[i]) s += t.exact;
  return s;
}

bool Generator::irreducible() const {
  // strongly connected iff state 0 reaches everything along edges and reversed edges
  auto reach = [&](bool forward) {
    std::vector<std::vector<std::size_t>> adj(size());
    for (std::size_t i = 0; i < size(); ++i) {
      for (const auto& t : rows_[i]) {
        if (t.rate <= 0) continue;
        if (forward) {
          adj[i].push_back(t.to);
        } else {
          adj[t.to].push_back(i);
        }
      }
    }
    std::vector<char> seen(size(), 0);
    std::queue<std::size_t> q;
    q.push(0);
    seen[0] = 1;
    std::size_t count = 1;
    while (!q.empty()) {
      const auto u = q.front();
      q.pop();
      for (auto v : adj[u]) {
        if (!seen[v]) {
          seen[v] = 1;
          ++count;
          q.push(v);
        }
      }
    }
    return count == size();
  };
  return reach(true) && reach(false);
}

namespace {

// Solves pi Q = 0 with sum pi = 1: the transposed system with the last
// balance equation replaced by the normalization row. Q^T row j reads
// sum_i pi_i Q_ij = 0.
template <class T, class Rate, class Exit>
std::vector<T> solve_stationary(const Generator& g, Rate rate_of, Exit exit_of) {
  const std::size_t n = g.size();
  std::vector<std::vector<T>> A(n, std::vector<T>(n + 1, T(0)));
  for (std::size_t i = 0; i < n; ++i) {
    A[i][i] -= exit_of(i);
    for (const auto& t : g.row(i)) A[t.to][i] += rate_of(t);
  }
  for (std::size_t j = 0; j < n; ++j) A[n - 1][j] = T(1);
  A[n - 1][n] = T(1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    if constexpr (std::is_floating_point_v<T>) {
      for (std::size_t r = c + 1; r < n; ++r) {
        if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
      }
      if (A[piv][c] == 0) throw ModelError("singular generator: the chain is reducible");
    } else {
      while (piv < n && sgn(A[piv][c]) == 0) ++piv;
      if (piv == n) throw ModelError("singular generator: the chain is reducible");
    }
    std::swap(A[c], A[piv]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      if constexpr (std::is_floating_point_v<T>) {
        if (A[r][c] == 0) continue;
      } else {
        if (sgn(A[r][c]) == 0) continue;
      }
      const T f = A[r][c] / A[c][c];
      for (std::size_t k = c; k <= n; ++k) A[r][k] -= f * A[c][k];
    }
  }
  std::vector<T> pi(n);
  for (std::size_t i = 0; i < n; ++i) pi[i] = A[i][n] / A[i][i];
  return pi;
}

}  // namespace

WeightedDistribution<Partition> stationary_distribution(const Generator& g, Arithmetic mode) {
  if (!g.irreducible()) throw ModelError("generator is reducible; no unique stationary law");
  WeightedDistribution<Partition> d;
  d.support = g.states();
  d.mode = mode;
  d.method = "linear_solve";
  if (mode == Arithmetic::rational) {
    if (!g.exact()) throw ConfigError("rational stationary law needs an exact parameter function");
    d.exact = solve_stationary<Rational>(
        g, [](const Generator::Transition& t) { return t.exact; },
        [&](std::size_t i) { return g.exit_rate_exact(i); });
    for (const auto& v : d.exact) d.probability.push_back(to_double(v));
    return d;
  }
  d.probability = solve_stationary<double>(
      g, [](const Generator::Transition& t) { return t.rate; }, [&](std::size_t i) { return g.exit_rate(i); });
  double s = 0;
  for (double v : d.probability) s += v;
  for (double& v : d.probability) v /= s;
  d.error_bound = 1e3 * static_cast<double>(g.size()) * 2.2e-16;
  return d;
}

BalanceReport check_detailed_balance(const Generator& g, const RateSystem& rs) {
  BalanceReport rep;
  const auto& a = rs.weights();
  if (g.exact()) {
    rep.mode = Arithmetic::rational;
    const auto mu = invariant_measure(g.N(), a, Arithmetic::rational);
    for (std::size_t i = 0; i < g.size(); ++i) {
      for (const auto& t : g.row(i)) {
        const Rational back = g.rate_exact(t.to, i);
        Rational v = mu.exact[i] * t.exact - mu.exact[t.to] * back;
        if (sgn(v) < 0) v = -v;
        if (v > rep.max_violation) rep.max_violation = v;
        ++rep.pairs_checked;
      }
    }
    rep.max_violation_float = to_double(rep.max_violation);
    return rep;
  }
  rep.mode = Arithmetic::floating;
  const auto mu = invariant_measure(g.N(), a, Arithmetic::floating);
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (const auto& t : g.row(i)) {
      const double v = std::abs(mu.probability[i] * t.rate - mu.probability[t.to] * g.rate(t.to, i));
      rep.max_violation_float = std::max(rep.max_violation_float, v);
      ++rep.pairs_checked;
    }
  }
  return rep;
}

BalanceReport check_detailed_balance(int N, const RateSystem& rs, int guard) {
  return check_detailed_balance(Generator::build(N, rs, guard), rs);
}

double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
  if (p.size() != q.size()) throw ConfigError("total variation needs laws on a common support");
  double s = 0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return s / 2;
}

}  // namespace cfp
