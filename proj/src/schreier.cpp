#include "tsf/schreier.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <string>

namespace tsf::schreier {

int checked_order(int xi, int cap) {
  if (xi < 0 || xi > cap)
    fail(ErrorKind::Input, "order " + std::to_string(xi) + " outside [0, " + std::to_string(cap) + "]");
  return xi;
}

Automaton::Automaton(int xi) : xi_(xi), limit_(static_cast<std::size_t>(std::max(xi, 0))), count_(limit_.size()) {
  if (xi < 0) fail(ErrorKind::Input, "order must be nonnegative");
}

bool Automaton::accepts(Index x) const {
  Automaton probe = *this;
  return probe.push(x);
}

bool Automaton::push(Index x) {
  if (empty_) {
    empty_ = false;
    std::fill(limit_.begin(), limit_.end(), x);
    std::fill(count_.begin(), count_.end(), Index{1});
    return true;
  }
  for (int t = 0; t < xi_; ++t) {
    if (count_[t] < limit_[t]) {
      ++count_[t];
      for (int s = 0; s < t; ++s) {
        limit_[s] = x;
        count_[s] = 1;
      }
      return true;
    }
  }
  return false;
}

bool Automaton::dominates(const Automaton& other) const {
  if (empty_) return true;
  if (other.empty_) return false;
  // Only the spare capacity limit - count of each level affects later pushes.
  for (int t = 0; t < xi_; ++t)
    if (limit_[t] - count_[t] < other.limit_[t] - other.count_[t]) return false;
  return true;
}

namespace {

// A k-point set lies in some S_ξ iff it lies in S_{k-1}, and the families increase with ξ.
int effective_order(int xi, std::size_t points) {
  if (xi < 0) fail(ErrorKind::Input, "order must be nonnegative");
  return static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(xi), points > 0 ? points - 1 : 0));
}

}  // namespace

bool is_member(const FinSet& f, int xi) {
  Automaton a(effective_order(xi, f.size()));
  for (Index x : f)
    if (!a.push(x)) return false;
  return true;
}

GreedyDecomposition greedy_decompose(const FinSet& f, int xi) {
  checked_order(xi);
  if (xi < 1) fail(ErrorKind::Precondition, "greedy_decompose needs xi >= 1");
  GreedyDecomposition out;
  if (f.empty()) return out;
  const Index allowed = f.min();
  std::vector<Index> block;
  Automaton a(xi - 1);
  for (Index x : f) {
    if (!a.push(x)) {
      out.blocks.emplace_back(std::move(block));
      block.clear();
      if (static_cast<Index>(out.blocks.size()) >= allowed) {
        out.failed_at = x;
        return out;
      }
      a = Automaton(xi - 1);
      a.push(x);
    }
    block.push_back(x);
  }
  out.blocks.emplace_back(std::move(block));
  return out;
}

bool is_maximal_member(const FinSet& f, int xi) {
  if (!is_member(f, xi)) fail(ErrorKind::NotAMember, "set is not a member of S_" + std::to_string(xi));
  // By spreading, any one-point extension is dominated by appending max F + 1.
  const Index next = f.empty() ? 1 : f.max() + 1;
  return !is_member(f.with_appended(next), xi);
}

namespace {

struct UnionSearch {
  std::span<const Index> elems;
  int r;
  int xi;
  std::set<std::pair<std::size_t, std::vector<std::vector<Index>>>> dead;

  bool run(std::size_t i, std::vector<Automaton>& parts, std::vector<std::vector<Index>>& contents) {
    if (i == elems.size()) return true;
    auto key_contents = contents;
    std::sort(key_contents.begin(), key_contents.end());
    auto key = std::make_pair(i, key_contents);
    if (dead.count(key)) return false;
    const Index x = elems[i];
    for (std::size_t p = 0; p < parts.size(); ++p) {
      Automaton saved = parts[p];
      if (!parts[p].push(x)) continue;
      contents[p].push_back(x);
      if (run(i + 1, parts, contents)) return true;
      contents[p].pop_back();
      parts[p] = saved;
    }
    if (static_cast<int>(parts.size()) < r) {
      parts.emplace_back(xi);
      parts.back().push(x);
      contents.push_back({x});
      if (run(i + 1, parts, contents)) return true;
      parts.pop_back();
      contents.pop_back();
    }
    dead.insert(std::move(key));
    return false;
  }
};

}  // namespace

bool is_union_of_members(const FinSet& g, int r, int xi) {
  xi = checked_order(effective_order(xi, g.size()));
  if (r < 1) fail(ErrorKind::Input, "r must be positive");
  if (g.empty() || static_cast<std::size_t>(r) >= g.size()) return true;
  if (is_member(g, xi)) return true;
  if (r == 1) return false;
  UnionSearch search{g.elements(), r, xi, {}};
  std::vector<Automaton> parts;
  std::vector<std::vector<Index>> contents;
  return search.run(0, parts, contents);
}

bool is_admissible(const SetFamily& fam, int r, int xi) {
  if (fam.empty()) fail(ErrorKind::Input, "admissibility of an empty family is not defined");
  return is_union_of_members(fam.mins(), r, xi);
}

bool is_maximally_admissible(const SetFamily& fam, int xi) {
  if (fam.empty()) fail(ErrorKind::Input, "admissibility of an empty family is not defined");
  const FinSet mins = fam.mins();
  return is_member(mins, xi) && is_maximal_member(mins, xi);
}

// ---------------------------------------------------------------------------

namespace {

struct PathNode {
  std::size_t pos;
  std::shared_ptr<const PathNode> prev;
};
using Path = std::shared_ptr<const PathNode>;

struct Entry {
  Automaton state;
  Rational value;
  Path path;
};

// Keeps entries not dominated (state-wise and value-wise) by another entry.
template <class E>
void prune(std::vector<E>& entries) {
  if (entries.empty()) return;
  std::stable_sort(entries.begin(), entries.end(), [](const E& a, const E& b) { return a.value > b.value; });
  const int xi = entries.front().state.order();
  std::vector<E> kept;
  kept.reserve(entries.size());
  bool have_empty = false;
  Index best1 = -1;
  std::map<Index, Index> stair;  // spare(0) -> spare(1), spare(1) decreasing in spare(0)
  auto dominated = [&](const Automaton& s) {
    if (have_empty) return true;
    if (s.empty()) return false;
    if (xi == 1) return s.spare(0) <= best1;
    if (xi == 2) {
      auto it = stair.lower_bound(s.spare(0));
      return it != stair.end() && it->second >= s.spare(1);
    }
    return std::any_of(kept.begin(), kept.end(), [&](const E& k) { return k.state.dominates(s); });
  };
  for (auto& e : entries) {
    if (dominated(e.state)) continue;
    const Automaton& s = e.state;
    if (s.empty()) {
      have_empty = true;
    } else if (xi == 1) {
      best1 = s.spare(0);
    } else if (xi == 2) {
      const Index a = s.spare(0), b = s.spare(1);
      auto it = stair.upper_bound(a);
      while (it != stair.begin()) {
        auto prev = std::prev(it);
        if (prev->second > b) break;
        it = stair.erase(prev);
      }
      stair[a] = b;
    }
    kept.push_back(std::move(e));
  }
  entries = std::move(kept);
}

std::vector<std::size_t> unwind(const Path& p) {
  std::vector<std::size_t> out;
  for (const PathNode* n = p.get(); n != nullptr; n = n->prev.get()) out.push_back(n->pos);
  std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace

namespace {

constexpr std::size_t kFrontCap = std::size_t{1} << 16;

// Values are exact: either Rational or integers over a common denominator.
template <class V>
struct ScaledEntry {
  Automaton state;
  V value;
  std::int64_t path;  // index into the arena, -1 for none
};

template <class V>
std::pair<V, std::vector<std::size_t>> best_member(std::span<const WeightedPoint> points, const std::vector<V>& w,
                                                   int xi) {
  std::vector<std::pair<std::size_t, std::int64_t>> arena;  // (position, previous)
  std::vector<ScaledEntry<V>> entries{ScaledEntry<V>{Automaton(xi), V(0), -1}};
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!(w[i] > 0)) continue;
    const std::size_t n = entries.size();
    for (std::size_t k = 0; k < n; ++k) {
      Automaton next = entries[k].state;
      if (!next.push(points[i].at)) continue;
      arena.emplace_back(i, entries[k].path);
      entries.push_back(ScaledEntry<V>{std::move(next), entries[k].value + w[i], static_cast<std::int64_t>(arena.size()) - 1});
    }
    prune(entries);
    if (entries.size() > kFrontCap)
      fail(ErrorKind::CapExceeded, "max over S_" + std::to_string(xi) + " keeps more than " +
                                       std::to_string(kFrontCap) + " undominated states");
  }
  const ScaledEntry<V>* best = &entries.front();
  for (const auto& e : entries)
    if (e.value > best->value) best = &e;
  std::vector<std::size_t> pos;
  for (std::int64_t p = best->path; p >= 0; p = arena[static_cast<std::size_t>(p)].second)
    pos.push_back(arena[static_cast<std::size_t>(p)].first);
  std::reverse(pos.begin(), pos.end());
  return {best->value, std::move(pos)};
}

}  // namespace

BestMember max_weight_member(std::span<const WeightedPoint> points, int xi) {
  checked_order(xi);
  for (std::size_t i = 1; i < points.size(); ++i)
    if (points[i - 1].at >= points[i].at) fail(ErrorKind::Input, "points must be strictly increasing");
  mpz_class den = 1, total = 0;
  for (const auto& p : points)
    if (p.weight > 0) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), p.weight.get_den_mpz_t());
  std::vector<mpz_class> scaled;
  scaled.reserve(points.size());
  for (const auto& p : points) {
    scaled.push_back(p.weight > 0 ? mpz_class(p.weight.get_num() * (den / p.weight.get_den())) : mpz_class(0));
    total += scaled.back();
  }
  std::vector<std::size_t> pos;
  Rational value;
  if (total < (mpz_class(1) << 62)) {
    std::vector<std::int64_t> w;
    for (const auto& z : scaled) w.push_back(z.get_si());
    auto r = best_member(points, w, xi);
    value = Rational(mpz_class(static_cast<long>(r.first)), den);
    pos = std::move(r.second);
  } else {
    std::vector<Rational> w;
    for (const auto& p : points) w.push_back(p.weight > 0 ? p.weight : Rational(0));
    auto r = best_member(points, w, xi);
    value = r.first;
    pos = std::move(r.second);
  }
  value.canonicalize();
  std::vector<Index> witness;
  for (std::size_t p : pos) witness.push_back(points[p].at);
  return BestMember{value, FinSet(std::move(witness))};
}

ChainResult max_admissible_chain(std::span<const Index> labels, std::size_t lo, std::size_t hi, int xi,
                                 const std::function<Rational(std::size_t, std::size_t)>& edge,
                                 bool exclude_whole) {
  checked_order(xi);
  ChainResult best;
  if (labels.empty() || hi < lo || hi >= labels.size()) return best;
  const std::size_t n = hi - lo + 1;
  std::vector<std::vector<Entry>> at(n);
  for (std::size_t a = lo; a <= hi; ++a) {
    Automaton st(xi);
    st.push(labels[a]);
    at[a - lo].push_back(Entry{std::move(st), Rational(0), std::make_shared<const PathNode>(PathNode{a, nullptr})});
  }
  for (std::size_t a = lo; a <= hi; ++a) {
    auto& here = at[a - lo];
    prune(here);
    std::vector<Rational> edges(hi + 2 - a);  // edges[b - a - 1] for b in (a, hi + 1]
    for (std::size_t b = a + 1; b <= hi + 1; ++b) edges[b - a - 1] = edge(a, b);
    for (const auto& e : here) {
      const bool whole = exclude_whole && a == lo && e.path->prev == nullptr;
      if (!whole) {
        Rational cand = e.value + edges[hi - a];
        if (!best.found || cand > best.value) {
          best.found = true;
          best.value = cand;
          best.starts = unwind(e.path);
        }
      }
      for (std::size_t b = a + 1; b <= hi; ++b) {
        Automaton next = e.state;
        if (!next.push(labels[b])) continue;
        at[b - lo].push_back(Entry{std::move(next), e.value + edges[b - a - 1],
                                   std::make_shared<const PathNode>(PathNode{b, e.path})});
      }
    }
    here.clear();
    here.shrink_to_fit();
  }
  return best;
}

}  // namespace tsf::schreier
