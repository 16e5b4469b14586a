#include "helpers.hpp"

#include "tsf/schreier.hpp"

using namespace tsf;
using namespace tsf::test;

namespace {
const GroundSet evens = GroundSet::progression(2, 2);
}

TEST(Measures, PointMassesAtOrderZero) {
  EXPECT_EQ(repeated_average(0, evens, 3), Measure::unit(6));
}

TEST(Measures, FirstAverageOrderOne) {
  EXPECT_EQ(repeated_average(1, evens, 1), meas({{2, q(1, 2)}, {4, q(1, 2)}}));
  EXPECT_EQ(repeated_average(1, evens, 2), meas({{6, q(1, 6)}, {8, q(1, 6)}, {10, q(1, 6)}, {12, q(1, 6)}, {14, q(1, 6)}, {16, q(1, 6)}}));
}

TEST(Measures, FirstAverageOrderTwo) {
  std::vector<std::pair<Index, Rational>> e{{2, q(1, 4)}, {4, q(1, 4)}};
  for (Index i = 6; i <= 16; i += 2) e.emplace_back(i, q(1, 12));
  const Measure mu = repeated_average(2, evens, 1);
  EXPECT_EQ(mu, meas(e));
  EXPECT_EQ(mu.total(), 1);
  EXPECT_TRUE(schreier::is_maximal_member(mu.support(), 2));
}

TEST(Measures, SuccessiveAveragesAreSuccessive) {
  const auto avgs = repeated_averages(1, GroundSet({3, 5, 8}, GroundSet::Tail{9, 1}), 3);
  ASSERT_EQ(avgs.size(), 3u);
  EXPECT_EQ(avgs[1].support(), FinSet::interval(9, 17));
  for (std::size_t k = 0; k < avgs.size(); ++k) {
    EXPECT_EQ(avgs[k].total(), 1);
    EXPECT_TRUE(schreier::is_maximal_member(avgs[k].support(), 1));
    if (k > 0) EXPECT_TRUE(precedes(avgs[k - 1].support(), avgs[k].support()));
  }
}

TEST(Measures, SupportCap) {
  // The second S_2 average from 3 starts at 24 and needs more than 24 · 2^24 points.
  EXPECT_EQ(error_kind([] { repeated_averages(2, GroundSet::progression(3, 1), 2); }), ErrorKind::CapExceeded);
}

TEST(Measures, FiniteGroundRunsOut) {
  EXPECT_EQ(error_kind([] { repeated_average(1, GroundSet({2, 4}), 2); }), ErrorKind::GroundExhausted);
}

TEST(Measures, SchreierValue) {
  const auto a = schreier_value(Measure::unit(5), 1);
  EXPECT_EQ(a.value, 1);
  EXPECT_EQ(a.witness, FinSet{5});

  const auto b = schreier_value(meas({{2, q(1, 2)}, {4, q(1, 2)}}), 0);
  EXPECT_EQ(b.value, q(1, 2));
  EXPECT_EQ(b.witness, FinSet{2});

  const auto c = schreier_value(repeated_average(1, evens, 1), 1);
  EXPECT_EQ(c.value, 1);
  EXPECT_EQ(c.witness, (FinSet{2, 4}));
}

TEST(Measures, SchreierValueBoundedByOrderOverMin) {
  // ‖ξ_1^M‖_{ξ-1} ≤ ξ / min M
  for (int xi = 1; xi <= 2; ++xi) {
    const GroundSet g = GroundSet::progression(3, 2);
    EXPECT_LE(schreier_value(repeated_average(xi, g, 1), xi - 1).value, Rational(xi, 3)) << "xi=" << xi;
  }
}

TEST(Measures, Algebra) {
  const Measure half = meas({{2, q(1, 2)}, {4, q(1, 2)}});
  EXPECT_EQ(half.restrict(FinSet{2}), meas({{2, q(1, 2)}}));
  EXPECT_EQ(Measure::unit(3).negate(), meas({{3, q(-1)}}));
  EXPECT_TRUE((Measure::unit(2) + Measure::unit(2).negate()).empty());
  EXPECT_EQ(pair(half, ones({2, 3, 4})), 1);
  EXPECT_EQ(error_kind([] { Measure::from_entries({{2, q(1)}, {2, q(1)}}); }), ErrorKind::Input);
}

TEST(Measures, GroundSets) {
  const GroundSet g({2, 5}, GroundSet::Tail{7, 3});
  EXPECT_EQ(g.take(4), (std::vector<Index>{2, 5, 7, 10}));
  EXPECT_EQ(g.after(5).min(), 7);
  EXPECT_EQ(g.drop(3).min(), 10);
  EXPECT_EQ(error_kind([] { GroundSet({2, 4}).at(2); }), ErrorKind::GroundExhausted);
}
