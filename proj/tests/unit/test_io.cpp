#include "helpers.hpp"

#include "tsf/io.hpp"
#include "tsf/norms.hpp"

using namespace tsf;
using namespace tsf::test;

TEST(Io, Rationals) {
  EXPECT_EQ(format(q(6, 4)), "3/2");
  EXPECT_EQ(format(q(-4, 2)), "-2");
  EXPECT_EQ(parse_rational("-6/4"), q(-3, 2));
  EXPECT_EQ(error_kind([] { parse_rational("1/0"); }), ErrorKind::Input);
  EXPECT_EQ(error_kind([] { parse_rational("0.5"); }), ErrorKind::Input);
}

TEST(Io, CanonicalJsonIsSorted) {
  const io::json j = io::parse(R"({"b": 1, "a": {"d": [1, 2], "c": "x"}})");
  EXPECT_EQ(io::canonical(j), R"({"a":{"c":"x","d":[1,2]},"b":1})");
}

TEST(Io, RoundTrips) {
  const ParamSystem sys = toy();
  const ApTree t = flat(2, {2, 3}, {1, -1});
  EXPECT_EQ(io::decode_tree(io::encode(t)), t);
  const Vector x = vec({{2, q(1, 2)}, {5, q(-2)}});
  EXPECT_EQ(io::decode_vector(io::encode(x)), x);
  const GroundSet g({2, 3}, GroundSet::Tail{5, 2});
  EXPECT_EQ(io::decode_ground(io::encode(g)), g);
  const ParamSystem back = io::decode_params(io::encode(sys));
  EXPECT_EQ(back.M(), sys.M());
  EXPECT_EQ(back.N(), sys.N());
  EXPECT_EQ(back.mode(), Mode::Relaxed);
}

TEST(Io, Diagnostics) {
  try {
    io::decode_vector(io::parse(R"({"entries": [[2, "1"], [3, "x"]]})"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Input);
    EXPECT_NE(std::string(e.what()).find("vector.entries[1][1]"), std::string::npos) << e.what();
  }
  EXPECT_EQ(error_kind([] { io::parse("{\"a\": 1,\n  }", "f.json"); }), ErrorKind::Input);
  EXPECT_EQ(error_kind([] { io::decode_tree(io::parse(R"({"m": 0, "I": [2], "sign": 3})")); }), ErrorKind::Input);
}

TEST(Io, CertificateEncoding) {
  const auto c = mixed_norm(ones({2, 3, 4, 5}), toy());
  const io::json j = io::encode(c);
  EXPECT_EQ(j["value"], "3/2");
  EXPECT_TRUE(j["witness"].contains("tree"));
}

TEST(Io, ExitCodes) {
  EXPECT_EQ(exit_code(ErrorKind::GroundExhausted), 3);
  EXPECT_EQ(exit_code(ErrorKind::CapExceeded), 3);
  EXPECT_EQ(exit_code(ErrorKind::Input), 2);
  EXPECT_EQ(exit_code(ErrorKind::InvalidTree), 2);
}
