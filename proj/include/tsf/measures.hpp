#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "tsf/core.hpp"
#include "tsf/finset.hpp"

namespace tsf {

/// Finitely supported rational map on ℕ, stored sorted with no zero entries.
/// Tagged so that measures and vectors do not mix silently.
template <class Tag>
class Sparse {
 public:
  using Entry = std::pair<Index, Rational>;

  Sparse() = default;

  /// Any order; duplicate indices are an input error; zeros are dropped.
  static Sparse from_entries(std::vector<Entry> entries);
  static Sparse unit(Index i, Rational value = 1) { return from_entries({{i, std::move(value)}}); }

  const std::vector<Entry>& entries() const noexcept { return entries_; }
  bool empty() const noexcept { return entries_.empty(); }
  std::size_t size() const noexcept { return entries_.size(); }
  Rational at(Index i) const;
  FinSet support() const;
  Index min_index() const;
  Index max_index() const;

  Rational total() const;  // Σ values
  Rational l1() const;
  Rational linf() const;

  Sparse restrict(const FinSet& j) const;
  Sparse restrict(Index lo, Index hi) const;
  Sparse negate() const { return scale(Rational(-1)); }
  Sparse scale(const Rational& c) const;
  Sparse operator+(const Sparse& other) const;
  Sparse operator-(const Sparse& other) const { return *this + other.negate(); }

  /// Appends entries of a block lying strictly to the right, scaled by c.
  void append_scaled(const Sparse& block, const Rational& c);

  friend bool operator==(const Sparse&, const Sparse&) = default;

 private:
  std::vector<Entry> entries_;
};

struct MeasureTag {};
struct VectorTag {};
using Measure = Sparse<MeasureTag>;
using Vector = Sparse<VectorTag>;

/// μ(x) = Σ_n μ({n}) x(n).
Rational pair(const Measure& mu, const Vector& x);

template <class To, class From>
Sparse<To> retag(const Sparse<From>& s) {
  return Sparse<To>::from_entries(s.entries());
}

/// Infinite subset of ℕ given by a finite prefix and an optional arithmetic tail.
class GroundSet {
 public:
  struct Tail {
    Index start;
    Index step;
    friend bool operator==(const Tail&, const Tail&) = default;
  };

  GroundSet() = default;
  explicit GroundSet(std::vector<Index> prefix, std::optional<Tail> tail = std::nullopt);
  static GroundSet progression(Index start, Index step) { return GroundSet({}, Tail{start, step}); }

  const std::vector<Index>& prefix() const noexcept { return prefix_; }
  const std::optional<Tail>& tail() const noexcept { return tail_; }
  bool infinite() const noexcept { return tail_.has_value(); }
  bool has(std::size_t i) const noexcept { return tail_ || i < prefix_.size(); }

  /// i-th element, 0-based. GroundExhausted past a tail-less prefix.
  Index at(std::size_t i) const;
  Index min() const { return at(0); }
  /// First `count` elements.
  std::vector<Index> take(std::size_t count) const;
  /// Elements strictly greater than x.
  GroundSet after(Index x) const;
  /// Drops the first k elements.
  GroundSet drop(std::size_t k) const;

  friend bool operator==(const GroundSet&, const GroundSet&) = default;

 private:
  std::vector<Index> prefix_;
  std::optional<Tail> tail_;
};

/// ξ_1^M, ..., ξ_count^M. Support sizes are bounded by support_cap().
std::vector<Measure> repeated_averages(int xi, const GroundSet& m, std::size_t count);
/// ξ_n^M.
Measure repeated_average(int xi, const GroundSet& m, std::size_t n);

struct SchreierValue {
  Rational value;
  FinSet witness;
};

/// max_{F ∈ S_ξ} μ(F) with a maximiser.
SchreierValue schreier_value(const Measure& mu, int xi);

}  // namespace tsf
