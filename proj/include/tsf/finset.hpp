#pragma once

#include <compare>
#include <initializer_list>
#include <ostream>
#include <span>
#include <vector>

#include "tsf/core.hpp"

namespace tsf {

/// Strictly increasing finite subset of ℕ = {1, 2, ...}. May be empty.
class FinSet {
 public:
  FinSet() = default;
  explicit FinSet(std::vector<Index> elements);
  FinSet(std::initializer_list<Index> elements) : FinSet(std::vector<Index>(elements)) {}

  /// {lo, lo+1, ..., hi}; empty when hi < lo.
  static FinSet interval(Index lo, Index hi);

  bool empty() const noexcept { return elems_.empty(); }
  std::size_t size() const noexcept { return elems_.size(); }
  Index min() const;
  Index max() const;
  Index operator[](std::size_t i) const { return elems_[i]; }
  bool contains(Index x) const;

  std::span<const Index> elements() const noexcept { return elems_; }
  auto begin() const noexcept { return elems_.begin(); }
  auto end() const noexcept { return elems_.end(); }

  /// Copy with x appended; x must exceed max().
  FinSet with_appended(Index x) const;
  FinSet intersect(const FinSet& other) const;
  FinSet unite(const FinSet& other) const;
  bool is_subset_of(const FinSet& other) const;

  friend bool operator==(const FinSet&, const FinSet&) = default;
  friend auto operator<=>(const FinSet&, const FinSet&) = default;

 private:
  std::vector<Index> elems_;
};

/// E < F in the block sense: max E < min F. False if either is empty.
bool precedes(const FinSet& e, const FinSet& f);

std::ostream& operator<<(std::ostream& os, const FinSet& f);

/// Nonempty members, pairwise successive: F_1 < F_2 < ... .
class SetFamily {
 public:
  SetFamily() = default;
  explicit SetFamily(std::vector<FinSet> members);

  const std::vector<FinSet>& members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }

  /// {min F_k : k}.
  FinSet mins() const;
  FinSet unite() const;

 private:
  std::vector<FinSet> members_;
};

}  // namespace tsf
