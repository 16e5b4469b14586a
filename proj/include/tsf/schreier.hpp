#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "tsf/core.hpp"
#include "tsf/finset.hpp"

// Finite-order Schreier families S_0 ⊂ S_1 ⊂ ... :
//   S_0     = singletons ∪ {∅}
//   S_{ξ+1} = { F_1 ∪ ... ∪ F_n : n ≤ min F_1, F_1 < ... < F_n, F_i ∈ S_ξ } ∪ {∅}
namespace tsf::schreier {

inline constexpr int kDefaultOrderCap = 64;

/// Returns xi if 0 ≤ xi ≤ cap, otherwise throws an input error.
int checked_order(int xi, int cap = kDefaultOrderCap);

/// Greedy membership state for S_ξ, fed elements in increasing order.
///
/// Level t (1 ≤ t ≤ ξ) records the minimum of the current level-t block and
/// how many level-(t-1) blocks it holds. A new element first tries the lowest
/// level; when a level is full it opens a new block one level up and resets
/// every level below. This reproduces greedy maximal-prefix decomposition,
/// which is exact because the families are hereditary.
class Automaton {
 public:
  explicit Automaton(int xi);

  int order() const noexcept { return xi_; }
  bool empty() const noexcept { return empty_; }

  /// Feeds x (> every element fed so far). Returns false, leaving the state
  /// unchanged, when the enlarged set leaves S_ξ.
  bool push(Index x);
  /// True if push(x) would succeed.
  bool accepts(Index x) const;

  /// limit - count at a level; undefined while empty.
  Index spare(int level) const { return limit_[static_cast<std::size_t>(level)] - count_[static_cast<std::size_t>(level)]; }

  /// Every continuation accepted from `other` is accepted from *this.
  bool dominates(const Automaton& other) const;

  friend bool operator==(const Automaton&, const Automaton&) = default;

 private:
  int xi_;
  bool empty_ = true;
  boost::container::small_vector<Index, 6> limit_;
  boost::container::small_vector<Index, 6> count_;
};

bool is_member(const FinSet& f, int xi);

struct GreedyDecomposition {
  std::vector<FinSet> blocks;      // greedy maximal S_{ξ-1} prefixes
  std::optional<Index> failed_at;  // first element that cannot be placed
  bool ok() const noexcept { return !failed_at.has_value(); }
};

/// Witness for F ∈ S_ξ (ξ ≥ 1): blocks in S_{ξ-1} with count ≤ min F.
GreedyDecomposition greedy_decompose(const FinSet& f, int xi);

/// Requires f ∈ S_ξ (throws NotAMember otherwise).
bool is_maximal_member(const FinSet& f, int xi);

/// g is the union of r (possibly interleaved) members of S_ξ.
bool is_union_of_members(const FinSet& g, int r, int xi);

/// {min I_k} is a union of r members of S_ξ. Empty families are rejected.
bool is_admissible(const SetFamily& fam, int r, int xi);
bool is_maximally_admissible(const SetFamily& fam, int xi);

// ---------------------------------------------------------------------------
// Optimisation over S_ξ
// ---------------------------------------------------------------------------

struct WeightedPoint {
  Index at;
  Rational weight;
};

struct BestMember {
  Rational value;
  FinSet witness;
};

/// max Σ_{i ∈ F} w(i) over F ∈ S_ξ, F ⊆ points (strictly increasing `at`).
/// Non-positive weights never enter the maximiser; ∅ gives 0.
/// Throws CapExceeded when more than 2^16 undominated automaton states are live.
BestMember max_weight_member(std::span<const WeightedPoint> points, int xi);

struct ChainResult {
  bool found = false;
  Rational value;
  std::vector<std::size_t> starts;  // positions a_1 < ... < a_k
};

/// Maximises Σ_k edge(a_k, a_{k+1}) + edge(a_k, hi + 1) over nonempty start
/// sets {a_1 < ... < a_k} ⊆ [lo, hi] whose labels form a member of S_ξ.
/// `edge(a, b)` scores the block that starts at position a and ends before b.
/// With `exclude_whole`, the single start {lo} (one block = whole range) is skipped.
ChainResult max_admissible_chain(std::span<const Index> labels, std::size_t lo, std::size_t hi, int xi,
                                 const std::function<Rational(std::size_t, std::size_t)>& edge,
                                 bool exclude_whole);

}  // namespace tsf::schreier
