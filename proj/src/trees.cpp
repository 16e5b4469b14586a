#include "tsf/trees.hpp"

#include <algorithm>
#include <sstream>

#include "tsf/schreier.hpp"

namespace tsf {

namespace {

std::string path_str(const NodePath& p) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < p.size(); ++i) os << (i ? "," : "") << p[i];
  os << ']';
  return os.str();
}

std::string set_str(const FinSet& f) {
  std::ostringstream os;
  os << f;
  return os.str();
}

SetFamily child_family(const ApTree& t) {
  std::vector<FinSet> sets;
  sets.reserve(t.children.size());
  for (const auto& c : t.children) sets.push_back(c.I);
  return SetFamily(std::move(sets));
}

void collect_violations(const ApTree& t, const ParamSystem& sys, NodePath& path, std::vector<std::string>& out) {
  const std::string where = "node " + path_str(path) + ": ";
  if (t.sign != 1 && t.sign != -1) out.push_back(where + "sign must be +1 or -1, got " + std::to_string(t.sign));
  if (t.I.empty()) out.push_back(where + "empty set I");
  if (t.terminal()) {
    if (!t.children.empty()) out.push_back(where + "terminal node (m = 0) has children");
    if (t.I.size() != 1) out.push_back(where + "terminal set must be a singleton, got " + set_str(t.I));
    return;
  }
  const std::size_t j = t.m > 0 ? sys.weight_index(t.m) : 0;
  if (j == 0) out.push_back(where + "m_entry " + std::to_string(t.m) + " is not a listed element of M");
  if (t.children.empty()) {
    out.push_back(where + "non-terminal node has no children");
    return;
  }
  bool successive = true;
  for (std::size_t i = 0; i < t.children.size(); ++i) {
    if (t.children[i].I.empty()) successive = false;
    if (i > 0 && !precedes(t.children[i - 1].I, t.children[i].I)) successive = false;
  }
  if (!successive) {
    out.push_back(where + "children sets are not successive");
  } else {
    const SetFamily fam = child_family(t);
    if (fam.unite() != t.I)
      out.push_back(where + "I = " + set_str(t.I) + " differs from the union of children sets " + set_str(fam.unite()));
    if (j != 0 && !schreier::is_admissible(fam, 1, static_cast<int>(sys.n(j))))
      out.push_back(where + "children minima " + set_str(fam.mins()) + " are not in S_" + std::to_string(sys.n(j)));
  }
  for (std::size_t i = 0; i < t.children.size(); ++i) {
    path.push_back(i);
    collect_violations(t.children[i], sys, path, out);
    path.pop_back();
  }
}

void accumulate_mu(const ApTree& t, const Rational& scale, std::vector<Measure::Entry>& out) {
  if (t.terminal()) {
    if (!t.I.empty()) out.emplace_back(t.I.min(), scale * t.sign);
    return;
  }
  const Rational inner = scale * t.sign / t.m;
  for (const auto& c : t.children) accumulate_mu(c, inner, out);
}

std::optional<ApTree> restrict_node(const ApTree& t, const FinSet& j) {
  FinSet meet = t.I.intersect(j);
  if (meet.empty()) return std::nullopt;
  ApTree out{t.m, std::move(meet), t.sign, {}};
  for (const auto& c : t.children)
    if (auto r = restrict_node(c, j)) out.children.push_back(std::move(*r));
  return out;
}

}  // namespace

std::vector<std::string> tree_violations(const ApTree& t, const ParamSystem& sys) {
  std::vector<std::string> out;
  NodePath path;
  collect_violations(t, sys, path, out);
  return out;
}

void validate(const ApTree& t, const ParamSystem& sys) {
  auto v = tree_violations(t, sys);
  if (!v.empty()) throw InvalidTreeError(std::move(v));
}

Measure mu_of(const ApTree& t) {
  std::vector<Measure::Entry> entries;
  accumulate_mu(t, Rational(1), entries);
  return Measure::from_entries(std::move(entries));
}

Index weight(const ApTree& t) { return t.terminal() ? 1 : t.m; }

std::size_t depth(const ApTree& t) {
  std::size_t d = 0;
  for (const auto& c : t.children) d = std::max(d, depth(c));
  return d + 1;
}

std::size_t node_count(const ApTree& t) {
  std::size_t n = 1;
  for (const auto& c : t.children) n += node_count(c);
  return n;
}

const ApTree& node_at(const ApTree& t, const NodePath& path) {
  const ApTree* cur = &t;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (path[i] >= cur->children.size()) fail(ErrorKind::BadPath, "no node at " + path_str(path));
    cur = &cur->children[path[i]];
  }
  return *cur;
}

ApTree restrict(const ApTree& t, const FinSet& j) {
  auto r = restrict_node(t, j);
  if (!r) fail(ErrorKind::EmptyResult, "restriction to " + set_str(j) + " removes the root");
  return std::move(*r);
}

ApTree subtree(const ApTree& t, const NodePath& path) { return node_at(t, path); }

ApTree negate(const ApTree& t) {
  ApTree out = t;
  out.sign = -out.sign;
  return out;
}

ApTree combine(std::vector<ApTree> ts, std::size_t j, int sign, const ParamSystem& sys) {
  if (sign != 1 && sign != -1) fail(ErrorKind::Input, "sign must be +1 or -1");
  if (ts.empty()) fail(ErrorKind::Inadmissible, "cannot combine an empty list of trees");
  std::vector<FinSet> sets;
  for (const auto& t : ts) sets.push_back(t.I);
  for (std::size_t i = 1; i < sets.size(); ++i)
    if (!precedes(sets[i - 1], sets[i])) fail(ErrorKind::Inadmissible, "trees are not successive");
  const SetFamily fam(std::move(sets));
  const int nj = static_cast<int>(sys.n(j));
  if (!schreier::is_admissible(fam, 1, nj))
    fail(ErrorKind::Inadmissible, "root minima " + set_str(fam.mins()) + " are not in S_" + std::to_string(nj));
  return ApTree{sys.m(j), fam.unite(), sign, std::move(ts)};
}

NodeStats node_stats(const ApTree& t, const NodePath& path, const ParamSystem& sys) {
  NodeStats s;
  s.m = 1;
  const ApTree* cur = &t;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (path[i] >= cur->children.size()) fail(ErrorKind::BadPath, "no node at " + path_str(path));
    const std::size_t j = sys.weight_index(cur->m);
    if (j == 0) fail(ErrorKind::InvalidTree, "m_entry " + std::to_string(cur->m) + " is not in M");
    s.m *= cur->m;
    s.n += sys.n(j);
    s.eps *= cur->sign;
    cur = &cur->children[path[i]];
  }
  s.w = weight(*cur);
  return s;
}

AntichainVerdict antichain_check(const ApTree& t, const std::vector<NodePath>& f, const ParamSystem& sys) {
  if (f.empty()) fail(ErrorKind::Input, "antichain must be nonempty");
  for (std::size_t a = 0; a < f.size(); ++a)
    for (std::size_t b = 0; b < f.size(); ++b) {
      if (a == b) continue;
      const auto& x = f[a];
      const auto& y = f[b];
      if (x.size() <= y.size() && std::equal(x.begin(), x.end(), y.begin()))
        fail(ErrorKind::NotAntichain, "nodes " + path_str(x) + " and " + path_str(y) + " are comparable");
    }
  AntichainVerdict v;
  std::vector<FinSet> sets;
  for (const auto& p : f) {
    v.p = std::max(v.p, node_stats(t, p, sys).n);
    sets.push_back(node_at(t, p).I);
  }
  std::sort(sets.begin(), sets.end(), [](const FinSet& a, const FinSet& b) { return a.min() < b.min(); });
  v.admissible = schreier::is_admissible(SetFamily(std::move(sets)), 1, static_cast<int>(v.p));
  if (!v.admissible)
    fail(ErrorKind::Internal, "antichain sets are not S_" + std::to_string(v.p) + "-admissible in a valid tree");
  return v;
}

std::string_view to_string(PartClass c) {
  switch (c) {
    case PartClass::UnitWeight: return "unit-weight";
    case PartClass::Heavy: return "heavy";
    case PartClass::SmallCoefficient: return "small-coefficient";
  }
  return "?";
}

namespace {

struct DecomposeWalk {
  const ParamSystem& sys;
  Index mj;
  mpz_class mj2;
  std::vector<DecompositionPart>& parts;

  void add(const ApTree& node, const NodePath& path, const mpz_class& m, int eps, Index n, PartClass cls) {
    parts.push_back(DecompositionPart{path, Rational(1) / (Rational(m) * eps), node, cls, n});
  }

  // Called on nodes β with m(β) < m_j² and all strict-ancestor entries < m_j.
  void visit(const ApTree& node, NodePath& path, const mpz_class& m, int eps, Index n) {
    if (node.terminal()) {
      add(node, path, m, eps, n, PartClass::UnitWeight);
      return;
    }
    const mpz_class child_m = m * node.m;
    const Index child_n = n + sys.n(sys.weight_index(node.m));
    const int child_eps = eps * node.sign;
    if (node.m < mj && child_m < mj2) {
      for (std::size_t i = 0; i < node.children.size(); ++i) {
        path.push_back(i);
        visit(node.children[i], path, child_m, child_eps, child_n);
        path.pop_back();
      }
      return;
    }
    if (node.m >= mj) {
      add(node, path, m, eps, n, PartClass::Heavy);
      return;
    }
    // Every branch through β continues to a child with m_j² ≤ m(child) < m_j³.
    for (std::size_t i = 0; i < node.children.size(); ++i) {
      path.push_back(i);
      add(node.children[i], path, child_m, child_eps, child_n, PartClass::SmallCoefficient);
      path.pop_back();
    }
  }
};

}  // namespace

Decomposition decompose(const ApTree& t, std::size_t j, const ParamSystem& sys) {
  validate(t, sys);
  Decomposition d;
  d.j = j;
  const Index mj = sys.m(j);
  d.f_j = sys.f(j);
  if (weight(t) >= mj)
    fail(ErrorKind::WeightTooLarge,
         "w(T) = " + std::to_string(weight(t)) + " is not below m_" + std::to_string(j) + " = " + std::to_string(mj));
  if (t.terminal()) {
    d.parts.push_back(DecompositionPart{{}, Rational(1), t, PartClass::UnitWeight, 0});
    return d;
  }
  DecomposeWalk walk{sys, mj, mpz_class(static_cast<long>(mj)) * mj, d.parts};
  NodePath path;
  walk.visit(t, path, mpz_class(1), 1, 0);

  std::vector<FinSet> sets;
  for (const auto& p : d.parts) {
    if (p.n_alpha > d.f_j)
      fail(ErrorKind::Internal, "n(α) = " + std::to_string(p.n_alpha) + " exceeds f_j = " + std::to_string(d.f_j));
    sets.push_back(p.tree.I);
  }
  const SetFamily fam(std::move(sets));
  if (!schreier::is_admissible(fam, 1, static_cast<int>(d.f_j)))
    fail(ErrorKind::Internal, "decomposition parts are not S_" + std::to_string(d.f_j) + "-admissible");
  return d;
}

// ---------------------------------------------------------------------------

namespace {

class Enumerator {
 public:
  Enumerator(const EnumerateOptions& opts, const ParamSystem& sys) : opts_(opts), sys_(sys) {
    for (std::size_t j = 1; j <= sys.M().prefix().size() && sys.has_weight(j); ++j)
      weights_.push_back({sys.m(j), static_cast<int>(sys.n(j))});
  }

  std::size_t run(const std::function<bool(const ApTree&)>& visit) {
    if (opts_.depth_max == 0 || opts_.support_bound < 1) return 0;
    // levels_[d] holds all trees of depth ≤ d + 1, sorted by min I.
    for (std::size_t d = 1; d < opts_.depth_max; ++d) levels_.push_back(build(d, false, nullptr));
    std::size_t visited = 0;
    build(opts_.depth_max, true, [&](const ApTree& t) {
      ++visited;
      return visit(t);
    });
    return visited;
  }

 private:
  using Sink = std::function<bool(const ApTree&)>;

  void charge() {
    if (++produced_ > opts_.cap)
      fail(ErrorKind::CapExceeded, "tree enumeration exceeds " + std::to_string(opts_.cap) + " trees (TSF_CAP_TREES)");
  }

  // Trees of depth ≤ d; at the top level they stream into `sink`, otherwise they are returned.
  std::vector<ApTree> build(std::size_t d, bool top, const Sink& sink) {
    std::vector<ApTree> out;
    bool stop = false;
    auto emit = [&](ApTree t) {
      charge();
      if (top) {
        if (!sink(t)) stop = true;
      } else {
        out.push_back(std::move(t));
      }
    };
    const std::vector<int> signs = (top || opts_.positive_only) ? std::vector<int>{1} : std::vector<int>{1, -1};
    for (Index p = 1; p <= opts_.support_bound && !stop; ++p)
      for (int s : signs) {
        if (stop) break;
        emit(ApTree::leaf(p, s));
      }
    if (d >= 2) {
      const auto& lower = levels_[d - 2];
      for (const auto& [m, n] : weights_) {
        if (stop) break;
        for (std::size_t first = 0; first < lower.size() && !stop; ++first) {
          schreier::Automaton a(n);
          a.push(lower[first].I.min());
          ApTree node{m, {}, 1, {lower[first]}};
          std::vector<Index> u(lower[first].I.begin(), lower[first].I.end());
          extend(lower, first, a, node, u, signs, emit, stop);
        }
      }
    }
    std::stable_sort(out.begin(), out.end(), [](const ApTree& x, const ApTree& y) { return x.I.min() < y.I.min(); });
    return out;
  }

  // `node` holds the chosen children so far and `u` the union of their sets.
  template <class Emit>
  void extend(const std::vector<ApTree>& lower, std::size_t last, const schreier::Automaton& a, ApTree& node,
              std::vector<Index>& u, const std::vector<int>& signs, Emit& emit, bool& stop) {
    node.I = FinSet(u);
    for (int s : signs) {
      if (stop) return;
      node.sign = s;
      emit(node);
    }
    const Index after = lower[last].I.max();
    auto it = std::upper_bound(lower.begin(), lower.end(), after,
                               [](Index v, const ApTree& t) { return v < t.I.min(); });
    for (auto k = static_cast<std::size_t>(it - lower.begin()); k < lower.size() && !stop; ++k) {
      schreier::Automaton next = a;
      if (!next.push(lower[k].I.min())) continue;
      const std::size_t mark = u.size();
      u.insert(u.end(), lower[k].I.begin(), lower[k].I.end());
      node.children.push_back(lower[k]);
      extend(lower, k, next, node, u, signs, emit, stop);
      node.children.pop_back();
      u.resize(mark);
    }
  }

  const EnumerateOptions& opts_;
  const ParamSystem& sys_;
  std::vector<std::pair<Index, int>> weights_;
  std::vector<std::vector<ApTree>> levels_;
  std::size_t produced_ = 0;
};

}  // namespace

std::size_t enumerate(const EnumerateOptions& opts, const ParamSystem& sys,
                      const std::function<bool(const ApTree&)>& visit) {
  Enumerator e(opts, sys);
  return e.run(visit);
}

}  // namespace tsf
