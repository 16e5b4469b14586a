#include "helpers.hpp"

#include <random>

#include "tsf/io.hpp"
#include "tsf/norms.hpp"
#include "tsf/verify.hpp"

using namespace tsf;
using namespace tsf::test;

TEST(Norms, Schreier) {
  const auto a = schreier_norm(Vector::unit(7), 3);
  EXPECT_EQ(a.value, 1);
  EXPECT_EQ(std::get<FinSet>(a.witness), FinSet{7});

  const Vector x = ones({2, 3, 4});
  const auto b = schreier_norm(x, 1);
  EXPECT_EQ(b.value, 2);
  EXPECT_TRUE(check_schreier(x, 1, b));

  const Vector y = vec({{3, q(1, 2)}, {5, q(-3)}, {8, q(2)}});
  EXPECT_EQ(schreier_norm(y, 0).value, 3);
  EXPECT_TRUE(std::holds_alternative<std::monostate>(schreier_norm(Vector(), 2).witness));
}

TEST(Norms, ConditionalSchreier) {
  const auto a = cond_schreier_norm(ones({1, 2}), 1);
  EXPECT_EQ(a.value, 2);
  EXPECT_EQ(std::get<std::vector<SignedInterval>>(a.witness), (std::vector<SignedInterval>{{1, 2, 1}}));

  const Vector alt = vec({{1, q(1)}, {2, q(-1)}, {3, q(1)}});
  const auto b = cond_schreier_norm(alt, 1);
  EXPECT_EQ(b.value, 2);
  EXPECT_TRUE(check_cond(alt, 1, b));

  const Vector pair = vec({{1, q(1)}, {2, q(-1)}});
  const auto c = cond_schreier_norm(pair, 1);
  EXPECT_EQ(c.value, 1);
  EXPECT_TRUE(check_cond(pair, 1, c));
}

TEST(Norms, MixedPinnedValues) {
  const ParamSystem sys = toy();
  EXPECT_EQ(mixed_norm(Vector::unit(4), sys).value, 1);
  EXPECT_EQ(mixed_norm(ones({1, 2, 3}), sys).value, 1);

  // {3,4,5} ∈ S_1, so (1/2)(e_3*+e_4*+e_5*) gives 3/2.
  const Vector x = ones({2, 3, 4, 5});
  const auto c = mixed_norm(x, sys);
  EXPECT_EQ(c.value, q(3, 2));
  EXPECT_TRUE(check_mixed(x, sys, c));
  EXPECT_EQ(oracle_norm(x, sys, 4), q(3, 2));

  // The tree m=2 over [2,2] and m=2 over {3,4,5} only reaches 5/4.
  const ApTree quoted = combine({ApTree::leaf(2), flat(2, {3, 4, 5})}, 1, 1, sys);
  EXPECT_EQ(pair(mu_of(quoted), x), q(5, 4));
}

TEST(Norms, Oracle) {
  const ParamSystem sys = toy();
  EXPECT_EQ(oracle_norm(ones({3, 4, 5}), sys, 2), q(3, 2));
  EXPECT_EQ(oracle_norm(Vector::unit(5), sys, 1), 1);
  EXPECT_EQ(oracle_norm(Vector(), sys, 3), 0);
}

TEST(Norms, MixedMatchesOracleOnRandomVectors) {
  for (const ParamSystem& sys : {toy(), toy2()}) {
    const OracleNorm oracle(sys, 6, 3);
    verify::Rng rng(7);
    for (int k = 0; k < 60; ++k) {
      const Vector x = verify::random_vector(rng, 1, 6);
      const auto c = mixed_norm(x, sys);
      ASSERT_EQ(c.value, oracle.evaluate(x)) << io::canonical(io::encode(x));
      ASSERT_TRUE(check_mixed(x, sys, c));
    }
  }
}

TEST(Norms, FunctionalSets) {
  const ApTree t = flat(2, {2, 3});
  EXPECT_EQ(functional_set_norm(Vector::unit(2), {ApTree::leaf(2)}).value, 1);
  EXPECT_EQ(functional_set_norm(ones({2, 3}), {t}).value, 1);
  EXPECT_EQ(functional_set_norm(vec({{2, q(1)}, {3, q(-1)}}), {t, negate(t)}).value, 0);
  EXPECT_EQ(error_kind([] { functional_set_norm(Vector::unit(2), {}); }), ErrorKind::Input);
}

TEST(Norms, ForgedCertificatesAreRejected) {
  const ParamSystem sys = toy();
  const Vector x = ones({2, 3, 4, 5});
  auto c = mixed_norm(x, sys);
  c.value = 2;
  EXPECT_FALSE(check_mixed(x, sys, c));
  NormCertificate s{2, FinSet{2, 3, 4}};
  EXPECT_FALSE(check_schreier(x, 1, s));
}
