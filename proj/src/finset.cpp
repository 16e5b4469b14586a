#include "tsf/finset.hpp"

#include <algorithm>
#include <iterator>

namespace tsf {

FinSet::FinSet(std::vector<Index> elements) : elems_(std::move(elements)) {
  for (std::size_t i = 0; i < elems_.size(); ++i) {
    if (elems_[i] < 1) fail(ErrorKind::Input, "set elements must be positive integers");
    if (i > 0 && elems_[i - 1] >= elems_[i]) fail(ErrorKind::Input, "set elements must be strictly increasing");
  }
}

FinSet FinSet::interval(Index lo, Index hi) {
  std::vector<Index> v;
  if (hi >= lo) {
    v.reserve(static_cast<std::size_t>(hi - lo + 1));
    for (Index x = lo; x <= hi; ++x) v.push_back(x);
  }
  return FinSet(std::move(v));
}

Index FinSet::min() const {
  if (elems_.empty()) fail(ErrorKind::Precondition, "min of empty set");
  return elems_.front();
}

Index FinSet::max() const {
  if (elems_.empty()) fail(ErrorKind::Precondition, "max of empty set");
  return elems_.back();
}

bool FinSet::contains(Index x) const { return std::binary_search(elems_.begin(), elems_.end(), x); }

FinSet FinSet::with_appended(Index x) const {
  if (!elems_.empty() && x <= elems_.back()) fail(ErrorKind::Precondition, "appended element must exceed max");
  FinSet out = *this;
  out.elems_.push_back(x);
  return out;
}

FinSet FinSet::intersect(const FinSet& other) const {
  std::vector<Index> v;
  std::set_intersection(begin(), end(), other.begin(), other.end(), std::back_inserter(v));
  FinSet out;
  out.elems_ = std::move(v);
  return out;
}

FinSet FinSet::unite(const FinSet& other) const {
  std::vector<Index> v;
  std::set_union(begin(), end(), other.begin(), other.end(), std::back_inserter(v));
  FinSet out;
  out.elems_ = std::move(v);
  return out;
}

bool FinSet::is_subset_of(const FinSet& other) const {
  return std::includes(other.begin(), other.end(), begin(), end());
}

bool precedes(const FinSet& e, const FinSet& f) { return !e.empty() && !f.empty() && e.max() < f.min(); }

std::ostream& operator<<(std::ostream& os, const FinSet& f) {
  os << '{';
  for (std::size_t i = 0; i < f.size(); ++i) os << (i ? "," : "") << f[i];
  return os << '}';
}

SetFamily::SetFamily(std::vector<FinSet> members) : members_(std::move(members)) {
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (members_[i].empty()) fail(ErrorKind::Input, "family members must be nonempty");
    if (i > 0 && !precedes(members_[i - 1], members_[i]))
      fail(ErrorKind::NotSuccessive, "family members must be successive (max F_k < min F_{k+1})");
  }
}

FinSet SetFamily::mins() const {
  std::vector<Index> v;
  v.reserve(members_.size());
  for (const auto& m : members_) v.push_back(m.min());
  return FinSet(std::move(v));
}

FinSet SetFamily::unite() const {
  std::vector<Index> v;
  for (const auto& m : members_) v.insert(v.end(), m.begin(), m.end());
  return FinSet(std::move(v));
}

}  // namespace tsf
