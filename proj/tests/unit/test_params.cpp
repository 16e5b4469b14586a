#include "helpers.hpp"

using namespace tsf;
using namespace tsf::test;

TEST(Params, StrictValidSystem) {
  const auto r = validate_system(GroundSet({7, 50, 2501}), GroundSet({5, 6, 12}));
  EXPECT_TRUE(r.strict_valid);
  EXPECT_TRUE(r.relaxed_valid);
}

TEST(Params, RelaxedOnlySystem) {
  const auto r = validate_system(GroundSet({2, 4}), GroundSet({2, 3}));
  EXPECT_FALSE(r.strict_valid);
  EXPECT_TRUE(r.relaxed_valid);
}

TEST(Params, SquareGrowthViolated) {
  const auto r = validate_system(GroundSet({7, 40}), GroundSet({5, 6}));
  EXPECT_FALSE(r.strict_valid);
  EXPECT_EQ(error_kind([] { ParamSystem(GroundSet({7, 40}), GroundSet({5, 6}), GroundSet({1, 2}), Mode::Strict); }),
            ErrorKind::InvalidSystem);
}

TEST(Params, TailRuleIsChecked) {
  // 2^{l_i} > m_i fails once the tail of M outgrows 2^{l_i}.
  const auto r = validate_system(GroundSet({7, 50}, GroundSet::Tail{2501, 1}), GroundSet({5, 6}, GroundSet::Tail{12, 1}));
  EXPECT_FALSE(r.strict_valid);
}

TEST(Params, FValues) {
  EXPECT_EQ(f_value(GroundSet({2, 4}), GroundSet({1, 2}), 1), 1);
  EXPECT_EQ(f_value(GroundSet({7, 50}), GroundSet({1, 2}), 2), 6);
  EXPECT_EQ(f_value(GroundSet({2, 4}), GroundSet({1, 2}), 2), 5);
  // ρ over two weights: 2^a 4^b < 512 maximises a + 2b at 8.
  EXPECT_EQ(f_value(GroundSet({2, 4, 8}), GroundSet({1, 2, 3}), 3), 8);
  EXPECT_EQ(toy().f(2), 5);
}

TEST(Params, Goodness) {
  const ParamSystem sys(GroundSet({7, 50}), GroundSet({5, 6}), GroundSet({1, 2}), Mode::Strict);
  const auto r = is_good(sys, 2);
  EXPECT_FALSE(r.pass);
  ASSERT_EQ(r.rows.size(), 2u);
  EXPECT_FALSE(r.rows[0].pass);  // 5·2 ≥ 1
  EXPECT_EQ(r.rows[1].f, 6);
  EXPECT_FALSE(r.rows[1].pass);  // 6·7 ≥ 2

  const ParamSystem ok(GroundSet({7, 50}), GroundSet({5, 6}), GroundSet({11, 403}), Mode::Strict);
  EXPECT_TRUE(is_good(ok, 2).pass);
  EXPECT_TRUE(is_good(ok, 1).pass);
}

TEST(Params, MakeGood) {
  const GroundSet m({7, 50}), l({5, 6});
  const GroundSet all = GroundSet::progression(1, 1);
  EXPECT_EQ(make_good(m, l, all, 2), GroundSet({11, 403}));
  EXPECT_EQ(make_good(m, l, all, 1), GroundSet({11}));
  EXPECT_EQ(error_kind([&] { make_good(m, l, GroundSet({1, 2, 3, 10}), 1); }), ErrorKind::GroundExhausted);
  EXPECT_TRUE(is_good(ParamSystem(m, l, make_good(m, l, all, 2), Mode::Strict), 2).pass);
}

TEST(Params, Accessors) {
  const ParamSystem sys = toy();
  EXPECT_EQ(sys.mode(), Mode::Relaxed);
  EXPECT_EQ(sys.m(2), 4);
  EXPECT_EQ(sys.n(1), 1);
  EXPECT_EQ(sys.delta(1), q(1, 2));
  EXPECT_EQ(sys.weight_index(4), 2u);
  EXPECT_EQ(sys.weight_index(3), 0u);
  EXPECT_EQ(sys.weight_count(), 2u);
  EXPECT_FALSE(sys.has_weight(3));
}
