#include "cfp/partition.hpp"

#include "cfp/error.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

namespace cfp {

Partition Partition::from_counts(std::vector<std::pair<int, int>> counts) {
  std::map<int, long, std::greater<>> merged;
  for (auto [size, count] : counts) {
    if (size < 1) throw ConfigError("part sizes must be positive");
    if (count < 0) throw ConfigError("part counts must be non-negative");
    if (count > 0) merged[size] += count;
  }
  Partition out;
  long total = 0, groups = 0;
  for (auto [size, count] : merged) {
    out.blocks_.push_back({size, static_cast<int>(count)});
    total += static_cast<long>(size) * count;
    groups += count;
  }
  if (total > std::numeric_limits<int>::max()) throw SizeGuardError("partition total too large");
  out.total_ = static_cast<int>(total);
  out.groups_ = static_cast<int>(groups);
  return out;
}

Partition Partition::from_parts(const std::vector<int>& parts) {
  std::vector<std::pair<int, int>> counts;
  counts.reserve(parts.size());
  for (int p : parts) counts.emplace_back(p, 1);
  return from_counts(std::move(counts));
}

Partition Partition::singletons(int n) {
  if (n < 0) throw ConfigError("negative total");
  return from_counts({{1, n}});
}

Partition Partition::single_block(int n) {
  if (n < 0) throw ConfigError("negative total");
  if (n == 0) return {};
  return from_counts({{n, 1}});
}

Partition Partition::parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::vector<std::pair<int, int>> counts;
  std::string token;
  while (in >> token) {
    if (token == "0") continue;
    const auto caret = token.find('^');
    try {
      std::size_t used = 0;
      if (caret == std::string::npos) {
        const int size = std::stoi(token, &used);
        if (used != token.size()) throw ConfigError("bad partition token: " + token);
        counts.emplace_back(size, 1);
      } else {
        const std::string a = token.substr(0, caret), b = token.substr(caret + 1);
        const int size = std::stoi(a, &used);
        if (used != a.size()) throw ConfigError("bad partition token: " + token);
        const int count = std::stoi(b, &used);
        if (used != b.size()) throw ConfigError("bad partition token: " + token);
        counts.emplace_back(size, count);
      }
    } catch (const std::logic_error& e) {
      if (dynamic_cast<const ConfigError*>(&e)) throw;
      throw ConfigError("bad partition token: " + token);
    }
  }
  return from_counts(std::move(counts));
}

int Partition::count(int size) const {
  // blocks_ is sorted by decreasing size
  auto it = std::lower_bound(blocks_.begin(), blocks_.end(), size,
                             [](const Block& b, int s) { return b.size > s; });
  return (it != blocks_.end() && it->size == size) ? it->count : 0;
}

std::vector<int> Partition::parts() const {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(groups_));
  for (const auto& b : blocks_) out.insert(out.end(), static_cast<std::size_t>(b.count), b.size);
  return out;
}

std::string Partition::to_string() const {
  if (blocks_.empty()) return "0";
  std::string out;
  for (const auto& b : blocks_) {
    if (!out.empty()) out.push_back(' ');
    out += std::to_string(b.size) + '^' + std::to_string(b.count);
  }
  return out;
}

std::strong_ordering operator<=>(const Partition& a, const Partition& b) {
  if (a.total_ != b.total_) return a.total_ <=> b.total_;
  const std::size_t n = std::min(a.blocks_.size(), b.blocks_.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto& x = a.blocks_[i];
    const auto& y = b.blocks_[i];
    // a larger leading part, or more copies of an equal part, sorts first
    if (x.size != y.size) return y.size <=> x.size;
    if (x.count != y.count) return y.count <=> x.count;
  }
  return b.blocks_.size() <=> a.blocks_.size();
}

// ---- interaction tuples ---------------------------------------------------

InteractionTuple::InteractionTuple(std::vector<int> sizes) : sizes_(std::move(sizes)) {
  if (sizes_.size() < 2) throw ConfigError("an interaction needs at least two groups");
  std::sort(sizes_.begin(), sizes_.end());
  if (sizes_.front() < 1) throw ConfigError("interaction sizes must be positive");
  for (int s : sizes_) mass_ += s;
}

std::vector<InteractionTuple::Multiplicity> InteractionTuple::multiplicities() const {
  std::vector<Multiplicity> out;
  for (int s : sizes_) {
    if (!out.empty() && out.back().size == s) {
      ++out.back().count;
    } else {
      out.push_back({s, 1});
    }
  }
  return out;
}

std::string InteractionTuple::to_string() const {
  std::string out = "(";
  for (std::size_t i = 0; i < sizes_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(sizes_[i]);
  }
  return out + ')';
}

// ---- enumeration ----------------------------------------------------------

std::vector<Partition> enumerate_partitions(int n, int guard) {
  if (n < 0) throw ConfigError("cannot enumerate partitions of a negative integer");
  if (n > guard) {
    throw SizeGuardError("enumeration of partitions of " + std::to_string(n) +
                         " exceeds the guard " + std::to_string(guard));
  }
  std::vector<Partition> out;
  if (n == 0) {
    out.emplace_back();
    return out;
  }
  out.reserve(partition_count(n));
  // Reverse-lexicographic successor on the multiplicity representation.
  std::vector<int> a{n};
  while (true) {
    out.push_back(Partition::from_parts(a));
    // find rightmost part > 1
    int ones = 0;
    while (!a.empty() && a.back() == 1) {
      a.pop_back();
      ++ones;
    }
    if (a.empty()) break;
    const int k = --a.back();
    int rem = ones + 1;
    while (rem > k) {
      a.push_back(k);
      rem -= k;
    }
    if (rem > 0) a.push_back(rem);
  }
  return out;
}

std::uint64_t partition_count(int n) {
  if (n < 0) return 0;
  if (n > 405) throw SizeGuardError("p(n) overflows 64 bits past n = 405");
  std::vector<std::uint64_t> p(static_cast<std::size_t>(n) + 1, 0);
  p[0] = 1;
  for (int part = 1; part <= n; ++part) {
    for (int m = part; m <= n; ++m) p[m] += p[m - part];
  }
  return p[n];
}

// ---- transformations ------------------------------------------------------

bool can_coagulate(const Partition& eta, const InteractionTuple& J) {
  for (auto [size, m] : J.multiplicities()) {
    if (eta.count(size) < m) return false;
  }
  return true;
}

bool can_fragment(const Partition& eta, const InteractionTuple& J) {
  return eta.count(J.mass()) >= 1;
}

namespace {
Partition adjust(const Partition& eta, const std::vector<std::pair<int, int>>& delta) {
  std::vector<std::pair<int, int>> counts;
  counts.reserve(eta.blocks().size() + delta.size());
  for (const auto& b : eta.blocks()) counts.emplace_back(b.size, b.count);
  std::map<int, int> net;
  for (auto [size, change] : delta) net[size] += change;
  for (auto& [size, count] : counts) {
    if (auto it = net.find(size); it != net.end()) {
      count += it->second;
      net.erase(it);
    }
  }
  for (auto [size, change] : net) counts.emplace_back(size, change);
  return Partition::from_counts(std::move(counts));
}
}  // namespace

Partition apply_coagulation(const Partition& eta, const InteractionTuple& J) {
  if (!can_coagulate(eta, J)) {
    throw NotApplicable("coagulation " + J.to_string() + " needs groups absent from " +
                        eta.to_string());
  }
  std::vector<std::pair<int, int>> delta;
  for (auto [size, m] : J.multiplicities()) delta.emplace_back(size, -m);
  delta.emplace_back(J.mass(), 1);
  return adjust(eta, delta);
}

Partition apply_fragmentation(const Partition& eta, const InteractionTuple& J) {
  if (!can_fragment(eta, J)) {
    throw NotApplicable("fragmentation " + J.to_string() + " needs a group of size " +
                        std::to_string(J.mass()) + " in " + eta.to_string());
  }
  std::vector<std::pair<int, int>> delta;
  delta.emplace_back(J.mass(), -1);
  for (auto [size, m] : J.multiplicities()) delta.emplace_back(size, m);
  return adjust(eta, delta);
}

// ---- tuple enumeration ----------------------------------------------------

std::vector<InteractionTuple> coagulation_tuples(const Partition& eta, int max_order) {
  std::vector<InteractionTuple> out;
  const auto& blocks = eta.blocks();
  // walk distinct sizes in increasing order so tuples come out sorted
  std::vector<Partition::Block> inc(blocks.rbegin(), blocks.rend());
  std::vector<int> current;
  std::function<void(std::size_t)> rec = [&](std::size_t idx) {
    if (current.size() >= 2) out.emplace_back(current);
    if (static_cast<int>(current.size()) == max_order) return;
    for (std::size_t i = idx; i < inc.size(); ++i) {
      int used = 0;
      for (auto it = current.rbegin(); it != current.rend() && *it == inc[i].size; ++it) ++used;
      if (used >= inc[i].count) continue;
      current.push_back(inc[i].size);
      rec(i);
      current.pop_back();
    }
  };
  rec(0);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<InteractionTuple> fragmentation_tuples(int m, int max_order) {
  std::vector<InteractionTuple> out;
  if (m < 2 || max_order < 2) return out;
  std::vector<int> current;
  // non-decreasing parts summing to m with 2..max_order parts
  std::function<void(int, int)> rec = [&](int remaining, int min_part) {
    const int parts = static_cast<int>(current.size());
    if (remaining == 0) {
      if (parts >= 2) out.emplace_back(current);
      return;
    }
    if (parts == max_order) return;
    for (int next = min_part; next <= remaining; ++next) {
      // a part followed by nothing must close the sum; avoid the trivial tuple (m)
      if (parts == 0 && next == m) continue;
      if (remaining - next != 0 && remaining - next < next) continue;
      current.push_back(next);
      rec(remaining - next, next);
      current.pop_back();
    }
  };
  rec(m, 1);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace cfp
