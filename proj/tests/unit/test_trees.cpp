#include "helpers.hpp"

using namespace tsf;
using namespace tsf::test;

namespace {

/// Chain of `levels` weight-m nodes, each with a single child, over a flat weight-m node at {3,4}.
ApTree chain(Index m, int levels) {
  ApTree t = flat(m, {3, 4});
  for (int k = 0; k < levels; ++k) t = ApTree{m, t.I, 1, {t}};
  return t;
}

Measure rebuild(const Decomposition& d) {
  Measure sum;
  for (const auto& p : d.parts) sum = sum + mu_of(p.tree).scale(p.lambda);
  return sum;
}

}  // namespace

TEST(Trees, Validation) {
  const ParamSystem sys = toy();
  EXPECT_TRUE(tree_violations(ApTree::leaf(5), sys).empty());
  EXPECT_TRUE(tree_violations(flat(2, {2, 3}), sys).empty());
  EXPECT_FALSE(tree_violations(flat(2, {1, 2, 3}), sys).empty());
  EXPECT_FALSE(tree_violations(flat(3, {2, 3}), sys).empty());  // 3 is not a listed weight
  ApTree gap = flat(2, {2, 3});
  gap.I = FinSet{2, 3, 4};
  EXPECT_FALSE(tree_violations(gap, sys).empty());
  EXPECT_EQ(error_kind([&] { validate(flat(2, {1, 2, 3}), sys); }), ErrorKind::InvalidTree);
}

TEST(Trees, Functional) {
  EXPECT_EQ(mu_of(ApTree::leaf(5)), Measure::unit(5));
  EXPECT_EQ(mu_of(flat(2, {2, 3})), meas({{2, q(1, 2)}, {3, q(1, 2)}}));
  EXPECT_EQ(mu_of(flat(2, {2, 3}, {1, -1})), meas({{2, q(1, 2)}, {3, q(-1, 2)}}));
  EXPECT_EQ(weight(ApTree::leaf(5)), 1);
  EXPECT_EQ(weight(flat(2, {2, 3})), 2);
  EXPECT_EQ(depth(flat(2, {2, 3})), 2u);
}

TEST(Trees, Algebra) {
  const ApTree t = flat(2, {2, 3});
  EXPECT_EQ(mu_of(restrict(t, FinSet{2})), meas({{2, q(1, 2)}}));
  EXPECT_EQ(mu_of(negate(ApTree::leaf(5))), meas({{5, q(-1)}}));
  EXPECT_EQ(mu_of(subtree(t, {0})), Measure::unit(2));
  EXPECT_EQ(error_kind([&] { subtree(t, {4}); }), ErrorKind::BadPath);
  EXPECT_EQ(error_kind([&] { restrict(t, FinSet{9}); }), ErrorKind::EmptyResult);
}

TEST(Trees, Combine) {
  const ParamSystem sys = toy();
  EXPECT_EQ(combine({ApTree::leaf(2), ApTree::leaf(3)}, 1, 1, sys), flat(2, {2, 3}));
  EXPECT_EQ(mu_of(combine({ApTree::leaf(7)}, 1, 1, sys)), meas({{7, q(1, 2)}}));
  EXPECT_EQ(error_kind([&] { combine({ApTree::leaf(1), ApTree::leaf(2), ApTree::leaf(3)}, 1, 1, sys); }),
            ErrorKind::Inadmissible);
}

TEST(Trees, NodeStats) {
  const ParamSystem sys = toy();
  const ApTree t = flat(2, {2, 3});
  const auto root = node_stats(t, {}, sys);
  EXPECT_EQ(root.m, 1);
  EXPECT_EQ(root.n, 0);
  EXPECT_EQ(root.eps, 1);
  EXPECT_EQ(root.w, 2);
  const auto child = node_stats(t, {1}, sys);
  EXPECT_EQ(child.m, 2);
  EXPECT_EQ(child.n, 1);
  EXPECT_EQ(child.w, 1);
  EXPECT_EQ(node_stats(negate(t), {0}, sys).eps, -1);
}

TEST(Trees, Antichains) {
  const ParamSystem sys = toy();
  const ApTree t = flat(2, {2, 3});
  const auto root = antichain_check(t, {{}}, sys);
  EXPECT_EQ(root.p, 0);
  EXPECT_TRUE(root.admissible);
  const auto kids = antichain_check(t, {{0}, {1}}, sys);
  EXPECT_EQ(kids.p, 1);
  EXPECT_TRUE(kids.admissible);
  EXPECT_EQ(error_kind([&] { antichain_check(t, {{}, {0}}, sys); }), ErrorKind::NotAntichain);
}

TEST(Trees, DecomposeSmallTrees) {
  const ParamSystem sys = toy();
  const auto single = decompose(ApTree::leaf(4, -1), 1, sys);
  ASSERT_EQ(single.parts.size(), 1u);
  EXPECT_EQ(single.parts[0].cls, PartClass::UnitWeight);
  EXPECT_EQ(abs(single.parts[0].lambda), 1);

  const ApTree t = flat(2, {2, 3});
  const auto d = decompose(t, 2, sys);
  ASSERT_EQ(d.parts.size(), 2u);
  for (const auto& p : d.parts) {
    EXPECT_EQ(p.cls, PartClass::UnitWeight);
    EXPECT_EQ(p.lambda, q(1, 2));
  }
  EXPECT_EQ(rebuild(d), mu_of(t));
  EXPECT_EQ(error_kind([&] { decompose(t, 1, sys); }), ErrorKind::WeightTooLarge);
}

TEST(Trees, DecomposeCutsDeepNodes) {
  // M=(2,5), j=2: nodes under ancestors with product ≥ 25 get coefficient ≤ 1/25.
  const ParamSystem sys = toy2();
  const ApTree shallow = chain(2, 3);  // deepest ancestor product 2^4 = 16
  const auto ds = decompose(shallow, 2, sys);
  EXPECT_EQ(rebuild(ds), mu_of(shallow));
  for (const auto& p : ds.parts) EXPECT_NE(p.cls, PartClass::SmallCoefficient);

  const ApTree deep = chain(2, 5);  // 2^6 = 64 ≥ 25
  const auto dd = decompose(deep, 2, sys);
  EXPECT_EQ(rebuild(dd), mu_of(deep));
  bool cut = false;
  for (const auto& p : dd.parts)
    if (p.cls == PartClass::SmallCoefficient) {
      cut = true;
      EXPECT_LE(abs(p.lambda), q(1, 25));
    }
  EXPECT_TRUE(cut);
}

TEST(Trees, Enumeration) {
  const ParamSystem sys = toy();
  std::vector<ApTree> seen;
  auto collect = [&](const ApTree& t) {
    seen.push_back(t);
    return true;
  };
  EXPECT_EQ(enumerate({.support_bound = 2, .depth_max = 1}, sys, collect), 2u);
  EXPECT_EQ(seen, (std::vector<ApTree>{ApTree::leaf(1), ApTree::leaf(2)}));

  seen.clear();
  enumerate({.support_bound = 3, .depth_max = 2}, sys, collect);
  EXPECT_NE(std::find(seen.begin(), seen.end(), flat(2, {2, 3})), seen.end());
  for (const auto& t : seen) EXPECT_TRUE(tree_violations(t, sys).empty());

  EXPECT_EQ(enumerate({.support_bound = 3, .depth_max = 0}, sys, collect), 0u);
  EXPECT_EQ(error_kind([&] { enumerate({.support_bound = 6, .depth_max = 3, .cap = 10}, sys, collect); }),
            ErrorKind::CapExceeded);
}
