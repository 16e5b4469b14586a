#include "helpers.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "tsf/coding.hpp"

using namespace tsf;
using namespace tsf::test;

namespace {

const Index big = Index(1) << 32;

ParamSystem squares() { return ParamSystem::relaxed({2, 4, 16, 256, 65536, big}, {1, 2, 3, 4, 5, 6}); }

ApTree single(Index m, Index p) { return ApTree{m, FinSet{p}, 1, {ApTree::leaf(p)}}; }

std::filesystem::path temp_registry(const char* name) {
  auto p = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove(p);
  return p;
}

}  // namespace

TEST(Coding, SigmaAssignment) {
  const ParamSystem sys = squares();
  SigmaRegistry reg;
  const auto a = sigma_assign({ApTree::leaf(2)}, reg, sys);
  EXPECT_EQ(a.index, 2u);
  EXPECT_EQ(a.value, 4);
  const auto again = sigma_assign({ApTree::leaf(2)}, reg, sys);
  EXPECT_EQ(again.index, a.index);
  EXPECT_EQ(reg.size(), 1u);

  const auto heavy = sigma_assign({single(256, 5)}, reg, sys);
  EXPECT_GT(heavy.value, 256);
  EXPECT_EQ(heavy.index % 2, 0u);

  const auto other = sigma_assign({ApTree::leaf(3)}, reg, sys);
  EXPECT_NE(other.index, a.index);
  EXPECT_EQ(error_kind([&] { sigma_assign({ApTree::leaf(3), ApTree::leaf(2)}, reg, sys); }), ErrorKind::NotSuccessive);
}

TEST(Coding, RegistryPersists) {
  const ParamSystem sys = squares();
  const auto path = temp_registry("tsf_unit_registry.jsonl");
  std::size_t first;
  {
    SigmaRegistry reg(path.string());
    first = sigma_assign({ApTree::leaf(2)}, reg, sys).index;
    sigma_assign({ApTree::leaf(4)}, reg, sys);
  }
  SigmaRegistry reloaded(path.string());
  EXPECT_EQ(reloaded.size(), 2u);
  EXPECT_EQ(sigma_assign({ApTree::leaf(2)}, reloaded, sys).index, first);

  std::ofstream(path, std::ios::app) << R"({"hash":"00","index":8,"payload":"[]"})" << "\n";
  EXPECT_EQ(error_kind([&] { SigmaRegistry bad(path.string()); }), ErrorKind::Input);
  std::filesystem::remove(path);
}

TEST(Coding, DependentChain) {
  const ParamSystem sys = squares();
  SigmaRegistry reg;
  const ApTree t1 = single(4, 2);
  const Index w2 = sigma_assign({t1}, reg, sys).value;
  EXPECT_EQ(w2, 256);
  const std::vector<ApTree> chain{t1, single(w2, 3)};
  const Verdict ok = is_dependent(chain, 1, reg, sys);
  EXPECT_TRUE(ok.ok);
  EXPECT_TRUE(ok.reasons.empty());

  const Verdict wrong = is_dependent({t1, single(16, 3)}, 1, reg, sys);
  EXPECT_FALSE(wrong.ok);
  EXPECT_EQ(wrong.reasons, std::vector<std::string>{"σ mismatch at i=2"});

  const ApTree low = single(4, 1);
  const Verdict inadmissible = is_dependent({low, single(sigma_assign({low}, reg, sys).value, 3)}, 1, reg, sys);
  EXPECT_EQ(inadmissible.reasons, std::vector<std::string>{"not S_1-admissible"});

  const Verdict odd = is_dependent({single(2, 2)}, 1, reg, sys);
  EXPECT_EQ(odd.reasons, std::vector<std::string>{"w(T_1) is not m_{2j} with j > p/2"});
}

TEST(Coding, Extensions) {
  const ParamSystem sys = squares();
  SigmaRegistry reg;
  const ApTree t1 = single(4, 3);
  const std::vector<ApTree> seq{t1, single(sigma_assign({t1}, reg, sys).value, 4)};
  ASSERT_TRUE(is_dependent(seq, 1, reg, sys).ok);
  EXPECT_TRUE(verify_extension(seq, {1, 0, seq}, 1, reg, sys).ok);

  std::vector<ApTree> shifted = seq;
  shifted[0] = single(4, 2);
  EXPECT_FALSE(verify_extension(seq, {1, 0, shifted}, 1, reg, sys).ok);

  const Verdict wrong_k = verify_extension(seq, {1, 1, seq}, 1, reg, sys);
  EXPECT_FALSE(wrong_k.ok);
  EXPECT_EQ(wrong_k.reasons, std::vector<std::string>{"full sequence length is not n + k"});

  // R_1 restricts to T_1 on [3, ∞), but σ(R_1) is a fresh value, so R_1, T_2 is not dependent.
  const ApTree r1{4, FinSet{2, 3}, 1, {ApTree::leaf(2), ApTree::leaf(3)}};
  SigmaRegistry fresh;
  ASSERT_TRUE(is_dependent(seq, 1, fresh, sys).ok);
  const Verdict lifted = verify_extension(seq, {3, 0, {r1, seq[1]}}, 1, fresh, sys);
  EXPECT_EQ(lifted.reasons, std::vector<std::string>{"σ mismatch at i=2"});
}

TEST(Coding, DependentFunctional) {
  const ParamSystem sys = squares();
  SigmaRegistry reg;
  const ApTree t1 = single(256, 4);
  EXPECT_EQ(dependent_functional({t1}, 1, 3, reg, sys), meas({{4, q(1, 256 * 16)}}));

  const Index w2 = sigma_assign({t1}, reg, sys).value;
  EXPECT_EQ(w2, big);
  const Measure f = dependent_functional({t1, single(w2, 5)}, 1, 3, reg, sys);
  Rational tail(1, big);
  tail /= 16;
  EXPECT_EQ(f, meas({{4, q(1, 256 * 16)}, {5, tail}}));
  EXPECT_LE(f.linf(), 1);

  EXPECT_EQ(error_kind([&] { dependent_functional({single(2, 4)}, 1, 3, reg, sys); }), ErrorKind::NotDependent);
  EXPECT_EQ(error_kind([&] { dependent_functional({t1}, 1, 2, reg, sys); }), ErrorKind::Precondition);
}
