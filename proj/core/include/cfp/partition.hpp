#ifndef CFP_PARTITION_HPP
#define CFP_PARTITION_HPP

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cfp {

/// Default ceiling for exhaustive enumeration of the state space
/// (p(60) = 966467 partitions).
inline constexpr int kEnumerationGuard = 60;

/// An unlabeled partition of `total`, stored sparsely as (part size, count)
/// pairs sorted by decreasing size. Only sizes with positive count are
/// stored, so two partitions are equal iff their blocks are equal.
class Partition {
 public:
  struct Block {
    int size;
    int count;
    friend bool operator==(const Block&, const Block&) = default;
  };

  /// The empty partition of 0.
  Partition() = default;

  /// Builds from arbitrary (size, count) pairs; zero counts are dropped and
  /// repeated sizes merged. Throws ConfigError on non-positive sizes or
  /// negative counts.
  static Partition from_counts(std::vector<std::pair<int, int>> counts);

  /// Builds from a list of part sizes in any order.
  static Partition from_parts(const std::vector<int>& parts);

  static Partition singletons(int n);    // {1:n}
  static Partition single_block(int n);  // {n:1}

  /// Parses the "j^n_j" text form, e.g. "4^1 2^2 1^3" (order-insensitive).
  /// A bare "j" means one part of size j.
  static Partition parse(std::string_view text);

  int total() const { return total_; }
  int group_count() const { return groups_; }
  int distinct_sizes() const { return static_cast<int>(blocks_.size()); }
  int count(int size) const;
  int largest() const { return blocks_.empty() ? 0 : blocks_.front().size; }
  int smallest() const { return blocks_.empty() ? 0 : blocks_.back().size; }
  const std::vector<Block>& blocks() const { return blocks_; }

  /// Part sizes in non-increasing order.
  std::vector<int> parts() const;

  /// Text form "j^n_j ..." sorted by decreasing j; "0" for the empty partition.
  std::string to_string() const;

  friend bool operator==(const Partition&, const Partition&) = default;
  /// Descending-lexicographic order on the part sequence: {3} < {2,1} < {1,1,1}.
  friend std::strong_ordering operator<=>(const Partition& a, const Partition& b);

 private:
  std::vector<Block> blocks_;
  int total_ = 0;
  int groups_ = 0;
};

/// A non-decreasing tuple of interacting group sizes (j_1 <= ... <= j_s).
class InteractionTuple {
 public:
  struct Multiplicity {
    int size;
    int count;
  };

  /// Sorts the sizes; throws ConfigError if fewer than two or any is < 1.
  explicit InteractionTuple(std::vector<int> sizes);

  const std::vector<int>& sizes() const { return sizes_; }
  int order() const { return static_cast<int>(sizes_.size()); }
  int mass() const { return mass_; }
  /// Distinct sizes with their multiplicity m_l, increasing in size.
  std::vector<Multiplicity> multiplicities() const;
  std::string to_string() const;

  friend bool operator==(const InteractionTuple&, const InteractionTuple&) = default;
  friend auto operator<=>(const InteractionTuple& a, const InteractionTuple& b) {
    return a.sizes_ <=> b.sizes_;
  }

 private:
  std::vector<int> sizes_;
  int mass_ = 0;
};

/// Every partition of n exactly once, in descending-lexicographic order
/// ({n} first, {1^n} last). n = 0 yields the single empty partition.
/// Throws SizeGuardError when n > guard.
std::vector<Partition> enumerate_partitions(int n, int guard = kEnumerationGuard);

/// Partition number p(n) from the part-size counting recurrence, without
/// enumerating. Exact for n <= 405 (p(406) overflows 64 bits).
std::uint64_t partition_count(int n);

/// True if every distinct size in J is present in eta with enough copies.
bool can_coagulate(const Partition& eta, const InteractionTuple& J);
bool can_fragment(const Partition& eta, const InteractionTuple& J);

/// eta^(J): removes the parts listed in J and adds one part of size |J|.
Partition apply_coagulation(const Partition& eta, const InteractionTuple& J);

/// eta_(J): removes one part of size |J| and adds the parts listed in J.
Partition apply_fragmentation(const Partition& eta, const InteractionTuple& J);

inline int group_count(const Partition& eta) { return eta.group_count(); }

/// All coagulation tuples of order 2..max_order that can act on eta, each
/// unordered tuple once, sorted.
std::vector<InteractionTuple> coagulation_tuples(const Partition& eta, int max_order);

/// All ways to split one part of size m into 2..max_order parts (the
/// partitions of m with that many parts), each once, sorted.
std::vector<InteractionTuple> fragmentation_tuples(int m, int max_order);

}  // namespace cfp

#endif  // CFP_PARTITION_HPP
