#include "helpers.hpp"

#include "tsf/schreier.hpp"
#include "tsf/verify.hpp"

using namespace tsf;
using namespace tsf::test;

TEST(Schreier, Membership) {
  EXPECT_TRUE(schreier::is_member({5}, 0));
  EXPECT_FALSE(schreier::is_member({5, 6}, 0));
  EXPECT_FALSE(schreier::is_member({2, 3, 4}, 1));
  EXPECT_TRUE(schreier::is_member({2, 3}, 1));
  EXPECT_TRUE(schreier::is_member({2, 3, 6, 7, 8}, 2));
  EXPECT_TRUE(schreier::is_member({}, 3));
}

TEST(Schreier, GreedyDecomposition) {
  const auto d = schreier::greedy_decompose({2, 3, 6, 7, 8}, 2);
  ASSERT_TRUE(d.ok());
  EXPECT_EQ(d.blocks, (std::vector<FinSet>{{2, 3}, {6, 7, 8}}));

  const auto one = schreier::greedy_decompose({7}, 1);
  ASSERT_TRUE(one.ok());
  EXPECT_EQ(one.blocks, std::vector<FinSet>{{7}});

  const auto bad = schreier::greedy_decompose({1, 2}, 1);
  ASSERT_FALSE(bad.ok());
  EXPECT_EQ(*bad.failed_at, 2);
}

TEST(Schreier, Maximality) {
  EXPECT_TRUE(schreier::is_maximal_member({3, 4, 5}, 1));
  EXPECT_FALSE(schreier::is_maximal_member({3, 4}, 1));
  // {2,3} ∪ {6..10} is still in S_2, so {2,3,6,7,8,9} extends.
  EXPECT_FALSE(schreier::is_maximal_member({2, 3, 6, 7, 8, 9}, 2));
  EXPECT_TRUE(schreier::is_maximal_member({2, 3, 6, 7, 8, 9, 10, 11}, 2));
  EXPECT_EQ(error_kind([] { schreier::is_maximal_member({1, 2}, 1); }), ErrorKind::NotAMember);
}

TEST(Schreier, Admissibility) {
  EXPECT_TRUE(schreier::is_admissible(SetFamily({{2}, {3}}), 1, 1));
  EXPECT_FALSE(schreier::is_admissible(SetFamily({{1}, {2}, {3}}), 1, 1));
  EXPECT_TRUE(schreier::is_admissible(SetFamily({{1}, {2}, {3}}), 2, 1));
  EXPECT_TRUE(schreier::is_maximally_admissible(SetFamily({{3, 4}, {5}, {7}}), 1));
  EXPECT_FALSE(schreier::is_maximally_admissible(SetFamily({{3, 4}, {5}}), 1));
  EXPECT_FALSE(schreier::is_maximally_admissible(SetFamily({{2}, {5, 6}, {7}}), 2));
  EXPECT_EQ(error_kind([] { schreier::is_admissible(SetFamily(), 1, 1); }), ErrorKind::Input);
}

TEST(Schreier, OrderCap) {
  EXPECT_EQ(error_kind([] { schreier::checked_order(-1); }), ErrorKind::Input);
  EXPECT_EQ(error_kind([] { schreier::checked_order(65); }), ErrorKind::Input);
  // A k-point set lies in S_ξ for some ξ iff it lies in S_{k-1}.
  EXPECT_TRUE(schreier::is_member({3, 4, 5, 6}, 1000));
}

TEST(Schreier, AgreesWithPartitionSearchOnSmallSets) {
  for (int xi = 0; xi <= 3; ++xi)
    for (unsigned mask = 1; mask < (1u << 10); ++mask) {
      std::vector<Index> pts;
      for (Index i = 1; i <= 10; ++i)
        if (mask >> (i - 1) & 1) pts.push_back(i);
      const FinSet f(pts);
      ASSERT_EQ(schreier::is_member(f, xi), verify::brute_member(f, xi)) << f << " xi=" << xi;
      if (verify::brute_member(f, xi))
        ASSERT_EQ(schreier::is_maximal_member(f, xi), verify::brute_maximal(f, xi)) << f << " xi=" << xi;
    }
}

TEST(Schreier, MaxWeightMember) {
  const std::vector<schreier::WeightedPoint> pts{{2, q(1)}, {3, q(5)}, {4, q(1)}, {5, q(2)}};
  const auto best = schreier::max_weight_member(pts, 1);
  EXPECT_EQ(best.value, q(8));
  EXPECT_EQ(best.witness, (FinSet{3, 4, 5}));
}
