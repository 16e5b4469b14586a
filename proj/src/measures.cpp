#include "tsf/measures.hpp"

#include <algorithm>
#include <string>

#include "tsf/schreier.hpp"

namespace tsf {

template <class Tag>
Sparse<Tag> Sparse<Tag>::from_entries(std::vector<Entry> entries) {
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.first < b.first; });
  Sparse out;
  out.entries_.reserve(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].first < 1) fail(ErrorKind::Input, "indices must be positive, got " + std::to_string(entries[i].first));
    if (i > 0 && entries[i - 1].first == entries[i].first)
      fail(ErrorKind::Input, "duplicate index " + std::to_string(entries[i].first));
    if (entries[i].second != 0) out.entries_.push_back(std::move(entries[i]));
  }
  return out;
}

template <class Tag>
Rational Sparse<Tag>::at(Index i) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), i, [](const Entry& e, Index k) { return e.first < k; });
  return (it != entries_.end() && it->first == i) ? it->second : Rational(0);
}

template <class Tag>
FinSet Sparse<Tag>::support() const {
  std::vector<Index> v;
  v.reserve(entries_.size());
  for (const auto& e : entries_) v.push_back(e.first);
  return FinSet(std::move(v));
}

template <class Tag>
Index Sparse<Tag>::min_index() const {
  if (entries_.empty()) fail(ErrorKind::Precondition, "empty support");
  return entries_.front().first;
}

template <class Tag>
Index Sparse<Tag>::max_index() const {
  if (entries_.empty()) fail(ErrorKind::Precondition, "empty support");
  return entries_.back().first;
}

template <class Tag>
Rational Sparse<Tag>::total() const {
  Rational s = 0;
  for (const auto& e : entries_) s += e.second;
  return s;
}

template <class Tag>
Rational Sparse<Tag>::l1() const {
  Rational s = 0;
  for (const auto& e : entries_) s += abs(e.second);
  return s;
}

template <class Tag>
Rational Sparse<Tag>::linf() const {
  Rational s = 0;
  for (const auto& e : entries_) s = std::max(s, abs(e.second));
  return s;
}

template <class Tag>
Sparse<Tag> Sparse<Tag>::restrict(const FinSet& j) const {
  Sparse out;
  for (const auto& e : entries_)
    if (j.contains(e.first)) out.entries_.push_back(e);
  return out;
}

template <class Tag>
Sparse<Tag> Sparse<Tag>::restrict(Index lo, Index hi) const {
  Sparse out;
  for (const auto& e : entries_)
    if (e.first >= lo && e.first <= hi) out.entries_.push_back(e);
  return out;
}

template <class Tag>
Sparse<Tag> Sparse<Tag>::scale(const Rational& c) const {
  Sparse out;
  if (c == 0) return out;
  out.entries_.reserve(entries_.size());
  for (const auto& e : entries_) out.entries_.emplace_back(e.first, e.second * c);
  return out;
}

template <class Tag>
Sparse<Tag> Sparse<Tag>::operator+(const Sparse& other) const {
  Sparse out;
  auto a = entries_.begin();
  auto b = other.entries_.begin();
  while (a != entries_.end() || b != other.entries_.end()) {
    if (b == other.entries_.end() || (a != entries_.end() && a->first < b->first)) {
      out.entries_.push_back(*a++);
    } else if (a == entries_.end() || b->first < a->first) {
      out.entries_.push_back(*b++);
    } else {
      Rational s = a->second + b->second;
      if (s != 0) out.entries_.emplace_back(a->first, std::move(s));
      ++a;
      ++b;
    }
  }
  return out;
}

template <class Tag>
void Sparse<Tag>::append_scaled(const Sparse& block, const Rational& c) {
  if (block.empty() || c == 0) return;
  if (!entries_.empty() && block.min_index() <= entries_.back().first)
    fail(ErrorKind::Precondition, "appended block must lie to the right");
  for (const auto& e : block.entries_) entries_.emplace_back(e.first, e.second * c);
}

template class Sparse<MeasureTag>;
template class Sparse<VectorTag>;

Rational pair(const Measure& mu, const Vector& x) {
  Rational s = 0;
  const auto& a = mu.entries();
  const auto& b = x.entries();
  std::size_t i = 0, k = 0;
  while (i < a.size() && k < b.size()) {
    if (a[i].first < b[k].first) {
      ++i;
    } else if (b[k].first < a[i].first) {
      ++k;
    } else {
      s += a[i++].second * b[k++].second;
    }
  }
  return s;
}

// ---------------------------------------------------------------------------

GroundSet::GroundSet(std::vector<Index> prefix, std::optional<Tail> tail)
    : prefix_(std::move(prefix)), tail_(tail) {
  for (std::size_t i = 0; i < prefix_.size(); ++i) {
    if (prefix_[i] < 1) fail(ErrorKind::Input, "ground elements must be positive");
    if (i > 0 && prefix_[i - 1] >= prefix_[i]) fail(ErrorKind::Input, "ground prefix must be strictly increasing");
  }
  if (tail_) {
    if (tail_->step < 1) fail(ErrorKind::Input, "tail step must be positive");
    if (tail_->start < 1) fail(ErrorKind::Input, "tail start must be positive");
    if (!prefix_.empty() && tail_->start <= prefix_.back())
      fail(ErrorKind::Input, "tail must start after the prefix");
  }
}

Index GroundSet::at(std::size_t i) const {
  if (i < prefix_.size()) return prefix_[i];
  if (!tail_)
    fail(ErrorKind::GroundExhausted,
         "ground set has " + std::to_string(prefix_.size()) + " listed elements and no tail rule; element " +
             std::to_string(i + 1) + " requested");
  return tail_->start + static_cast<Index>(i - prefix_.size()) * tail_->step;
}

std::vector<Index> GroundSet::take(std::size_t count) const {
  std::vector<Index> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(at(i));
  return out;
}

GroundSet GroundSet::after(Index x) const {
  std::vector<Index> p;
  for (Index v : prefix_)
    if (v > x) p.push_back(v);
  std::optional<Tail> t = tail_;
  if (t && t->start <= x) t->start += ((x - t->start) / t->step + 1) * t->step;
  return GroundSet(std::move(p), t);
}

GroundSet GroundSet::drop(std::size_t k) const {
  if (k == 0) return *this;
  return after(at(k - 1));
}

// ---------------------------------------------------------------------------

namespace {

struct Budget {
  std::size_t used = 0;
  std::size_t cap = support_cap();
  void charge(std::size_t n) {
    used += n;
    if (used > cap)
      fail(ErrorKind::CapExceeded,
           "repeated average support exceeds " + std::to_string(cap) + " points (TSF_CAP_SUPPORT)");
  }
};

std::vector<Measure> averages(int xi, const GroundSet& m, std::size_t count, Budget& budget) {
  std::vector<Measure> out;
  out.reserve(count);
  if (xi == 0) {
    budget.charge(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(Measure::unit(m.at(i)));
    return out;
  }
  GroundSet cur = m;
  for (std::size_t n = 0; n < count; ++n) {
    const Index k = cur.min();
    const auto inner = averages(xi - 1, cur, static_cast<std::size_t>(k), budget);
    Measure avg;
    const Rational weight(1, k);
    for (const auto& mu : inner) avg.append_scaled(mu, weight);
    cur = cur.after(avg.max_index());
    out.push_back(std::move(avg));
  }
  return out;
}

}  // namespace

namespace {

// supp ξ_n^M are consecutive maximal S_ξ runs of M, so their total size is known
// before any weight is built.
void check_support_size(int xi, const GroundSet& m, std::size_t count) {
  const std::size_t cap = support_cap();
  std::size_t pos = 0;
  for (std::size_t n = 0; n < count; ++n) {
    schreier::Automaton a(xi);
    while (m.has(pos) && a.push(m.at(pos)))
      if (++pos > cap)
        fail(ErrorKind::CapExceeded,
             "repeated average support exceeds " + std::to_string(cap) + " points (TSF_CAP_SUPPORT)");
    if (!m.has(pos)) return;
  }
}

}  // namespace

std::vector<Measure> repeated_averages(int xi, const GroundSet& m, std::size_t count) {
  schreier::checked_order(xi);
  if (count < 1) fail(ErrorKind::Input, "n must be positive");
  check_support_size(xi, m, count);
  Budget budget;
  return averages(xi, m, count, budget);
}

Measure repeated_average(int xi, const GroundSet& m, std::size_t n) {
  return repeated_averages(xi, m, n).back();
}

SchreierValue schreier_value(const Measure& mu, int xi) {
  std::vector<schreier::WeightedPoint> pts;
  pts.reserve(mu.size());
  for (const auto& [i, v] : mu.entries())
    if (v > 0) pts.push_back({i, v});
  auto best = schreier::max_weight_member(pts, xi);
  return {std::move(best.value), std::move(best.witness)};
}

}  // namespace tsf
