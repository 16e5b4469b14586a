#include "helpers.hpp"

#include "tsf/distortion.hpp"
#include "tsf/verify.hpp"

using namespace tsf;
using namespace tsf::test;

TEST(Distortion, GenericAverage) {
  const BlockBasis blocks({Vector::unit(2), Vector::unit(4)});
  const auto avg = generic_average(blocks, 1, 1, GroundSet({2, 4}));
  EXPECT_EQ(avg.vector, vec({{2, q(1, 2)}, {4, q(1, 2)}}));
  EXPECT_EQ(avg.achieved, q(1, 2));
  EXPECT_EQ(error_kind([&] { generic_average(blocks, q(1, 4), 1, GroundSet({2, 4})); }), ErrorKind::BoundViolated);

  const auto one = generic_average(BlockBasis({Vector::unit(5)}), 1, 0, GroundSet({5}));
  EXPECT_EQ(one.vector, Vector::unit(5));
  EXPECT_EQ(error_kind([&] { generic_average(blocks, 1, 1, GroundSet({2, 3})); }), ErrorKind::GroundMismatch);
}

TEST(Distortion, SelectGround) {
  const BlockBasis units = BlockBasis::units(2, 2, 40);
  // From 2 the bound is 1/2, so eps = 1/2 forces a later tail.
  EXPECT_EQ(select_ground(units, 1, 1).min(), 2);
  EXPECT_GT(select_ground(units, q(1, 2), 1).min(), 2);
}

TEST(Distortion, SmoothSearchOnUnitVectors) {
  const ParamSystem sys = toy();
  // The first (1, 2) average of e_2, e_4, ... has norm 7/24 < 1/2, so round one fails.
  try {
    smooth_average_search(BlockBasis::units(2, 2, 40), 1, 1, sys, 1);
    ADD_FAILURE() << "expected RoundsExhausted";
  } catch (const RoundsExhaustedError& e) {
    ASSERT_EQ(e.rounds().size(), 1u);
    EXPECT_EQ(e.rounds()[0].norm, q(7, 24));
    EXPECT_EQ(e.kind(), ErrorKind::RoundsExhausted);
  }
  const auto single = smooth_average_search(BlockBasis::units(5, 1, 1), 1, 1, sys, 1);
  EXPECT_EQ(single.report.vector, Vector::unit(5));
  EXPECT_EQ(*single.report.norm, 1);
  EXPECT_EQ(error_kind([&] { smooth_average_search(BlockBasis({ones({2, 3})}), 1, 1, sys, 1); }),
            ErrorKind::Precondition);
}

TEST(Distortion, Renorm) {
  const ParamSystem sys = toy();
  const auto r = renorm(Vector::unit(5), 1, sys);
  EXPECT_EQ(r.value, 1);
  EXPECT_EQ(r.sup, q(1, 2));
  EXPECT_TRUE(r.functional.violations(sys).empty());
  EXPECT_EQ(r.functional.apply(Vector::unit(5), sys), r.sup);
  EXPECT_EQ(renorm(Vector(), 1, sys).value, 0);

  verify::Rng rng(11);
  for (int k = 0; k < 40; ++k) {
    const Vector x = verify::random_vector(rng, 1, 7);
    for (std::size_t j : {1u, 2u}) {
      const auto rj = renorm(x, j, sys);
      EXPECT_LE(sys.delta(j) * rj.norm, rj.value);
      EXPECT_LE(rj.value, (1 + sys.delta(j)) * rj.norm);
    }
  }
}

TEST(Distortion, AverageFunctional) {
  const ParamSystem sys = toy();
  const BlockBasis units = BlockBasis::units(2, 1, 30);
  const auto avg = generic_average(units, q(1, 4), 1, select_ground(units, q(1, 4), 1), &sys);
  ASSERT_TRUE(avg.norm.has_value());
  EXPECT_LE(sys.delta(1), *avg.norm);
  EXPECT_LE(*avg.norm, 1);
  const AFunctional f = average_functional(units, avg, 1, sys);
  EXPECT_TRUE(f.violations(sys).empty());
  EXPECT_GE(f.apply(avg.vector, sys), sys.delta(1));
}

TEST(Distortion, PairPreconditions) {
  const ParamSystem sys = toy();
  EXPECT_EQ(error_kind([&] { distortion_pair(BlockBasis::units(2, 2, 10), 1, 1, sys, 6); }), ErrorKind::Precondition);
  EXPECT_EQ(error_kind([&] { distortion_pair(BlockBasis::units(2, 2, 10), 1, 2, sys, 6); }), ErrorKind::GroundExhausted);
}

TEST(Distortion, HiCheck) {
  const ParamSystem sys = toy();
  const HiConstants c{1, 1, 1};
  const auto h = hi_check({Vector::unit(3), Vector::unit(4), Vector::unit(5)}, 1, c, 1, 1, q(1, 2), sys);
  EXPECT_TRUE(h.maximal);
  EXPECT_TRUE(h.repeated_average);
  EXPECT_EQ(h.a, (std::vector<Rational>{q(1, 3), q(1, 3), q(1, 3)}));
  EXPECT_TRUE(h.cond1);

  const auto gap = hi_check({Vector::unit(3), Vector::unit(4), Vector::unit(5), Vector::unit(6)}, 1, c, 1, 1, q(1, 2), sys);
  EXPECT_FALSE(gap.maximal);
  EXPECT_FALSE(gap.cond1);

  const auto single = hi_check({Vector::unit(3)}, 1, c, 1, 1, q(1, 2), sys);
  EXPECT_FALSE(single.maximal);
  EXPECT_TRUE(hi_check({Vector::unit(1)}, 1, c, 1, 1, q(1, 2), sys).maximal);
}
