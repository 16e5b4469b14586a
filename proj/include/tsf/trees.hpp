#pragma once

#include <functional>
#include <string>
#include <vector>

#include "tsf/core.hpp"
#include "tsf/finset.hpp"
#include "tsf/measures.hpp"
#include "tsf/params.hpp"

namespace tsf {

/// Node of an appropriate tree. m == 0 marks a terminal node, whose I is a
/// singleton {p}. A non-terminal node with m = m_j has children whose sets are
/// successive and S_{n_j}-admissible, and I is their union.
struct ApTree {
  Index m = 0;
  FinSet I;
  int sign = 1;
  std::vector<ApTree> children;

  bool terminal() const noexcept { return m == 0; }
  static ApTree leaf(Index p, int sign = 1) { return ApTree{0, FinSet{p}, sign, {}}; }

  friend bool operator==(const ApTree&, const ApTree&) = default;
};

using NodePath = std::vector<std::size_t>;

/// Every violated condition, one line each; empty iff the tree is appropriate.
std::vector<std::string> tree_violations(const ApTree& t, const ParamSystem& sys);
/// Throws InvalidTreeError listing the violations.
void validate(const ApTree& t, const ParamSystem& sys);

/// Σ over terminals α of m(α)^{-1} ε(α) ε_α e*_{p_α}.
Measure mu_of(const ApTree& t);

/// w(T): 1 for a one-node tree, otherwise the root M-entry.
Index weight(const ApTree& t);
/// Number of levels; a single node has depth 1.
std::size_t depth(const ApTree& t);
std::size_t node_count(const ApTree& t);

const ApTree& node_at(const ApTree& t, const NodePath& path);

/// Keeps nodes whose set meets J and intersects their sets with J.
/// Throws EmptyResult when J misses the root set.
ApTree restrict(const ApTree& t, const FinSet& j);
/// T_α: the subtree rooted at α, keeping α's own sign.
ApTree subtree(const ApTree& t, const NodePath& path);
/// Flips the root sign, so that mu_of(negate(t)) = -mu_of(t).
ApTree negate(const ApTree& t);
/// New root (m_j, ∪ I, sign) over successive S_{n_j}-admissible trees.
ApTree combine(std::vector<ApTree> ts, std::size_t j, int sign, const ParamSystem& sys);

struct NodeStats {
  mpz_class m;  // product of strict-ancestor M-entries
  Index n = 0;  // sum of the corresponding n_i
  int eps = 1;  // product of strict-ancestor signs
  Index w = 1;  // weight of the subtree at the node
};

NodeStats node_stats(const ApTree& t, const NodePath& path, const ParamSystem& sys);

struct AntichainVerdict {
  Index p = 0;  // max n(α) over the antichain
  bool admissible = false;
};

/// {I_α : α ∈ F} is S_p-admissible, p = max n(α). Throws NotAntichain for
/// comparable nodes and Internal when the admissibility verdict is false.
AntichainVerdict antichain_check(const ApTree& t, const std::vector<NodePath>& f, const ParamSystem& sys);

enum class PartClass { UnitWeight, Heavy, SmallCoefficient };

std::string_view to_string(PartClass c);

struct DecompositionPart {
  NodePath path;  // node α of the input tree
  Rational lambda;
  ApTree tree;    // T_α
  PartClass cls;
  Index n_alpha;
};

struct Decomposition {
  std::size_t j = 0;
  Index f_j = 0;
  std::vector<DecompositionPart> parts;  // successive supports, left to right
};

/// Constructive decomposition of μ_T into parts that have weight 1, weight ≥ m_j,
/// or coefficient at most 1/m_j². Requires w(T) < m_j (WeightTooLarge otherwise).
Decomposition decompose(const ApTree& t, std::size_t j, const ParamSystem& sys);

struct EnumerateOptions {
  Index support_bound = 1;
  std::size_t depth_max = 1;
  /// Only positive signs below the root as well (the root is always positive).
  bool positive_only = false;
  std::size_t cap = tree_cap();
};

/// Streams every appropriate tree with root set ⊆ {1..support_bound}, depth ≤
/// depth_max and positive root sign, using the listed weights of sys. The
/// visitor may return false to stop early. Returns the number visited.
/// Throws CapExceeded once more than `cap` trees would be produced.
std::size_t enumerate(const EnumerateOptions& opts, const ParamSystem& sys,
                      const std::function<bool(const ApTree&)>& visit);

}  // namespace tsf
