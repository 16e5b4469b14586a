#pragma once

#include <atomic>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "tsf/core.hpp"
#include "tsf/finset.hpp"
#include "tsf/measures.hpp"
#include "tsf/params.hpp"
#include "tsf/trees.hpp"

namespace tsf::verify {

// ---------------------------------------------------------------------------
// Brute-force oracles, independent of the fast paths.

/// Membership straight from the recursive definition: every split of F into
/// consecutive runs F_1 < ... < F_n with n ≤ min F_1 and each run in S_{ξ-1}.
bool brute_member(const FinSet& f, int xi);

/// Maximality by trying every single extension inside [1, max F + 1].
bool brute_maximal(const FinSet& f, int xi);

/// max over all subsets F ∈ S_ξ of supp x of Σ |x(i)|.
Rational brute_schreier_norm(const Vector& x, int xi);

/// max over all families of successive intervals (each meeting supp x) whose
/// minima lie in S_ξ of Σ_k |Σ_{i ∈ J_k} x(i)|.
Rational brute_cond_norm(const Vector& x, int xi);

// ---------------------------------------------------------------------------
// Generators

using Rng = std::mt19937_64;

/// Random appropriate tree with min I ≥ start, depth ≤ depth_max, over the listed weights.
/// max_weight_index limits the node weights used (0 = all listed).
ApTree random_tree(Rng& rng, const ParamSystem& sys, Index start, std::size_t depth_max, bool signs = true,
                   std::size_t max_weight_index = 0);

/// Entries drawn from {±1, ±1/2, ±2} on a random subset of [lo, hi] (possibly empty).
Vector random_vector(Rng& rng, Index lo, Index hi);

// ---------------------------------------------------------------------------
// Property suite

struct Outcome {
  int id = 0;          // criterion number
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

struct Options {
  std::uint64_t seed = 20240611;
  /// Regimes for the norm, tree and renorm checks; empty means the two toy regimes
  /// M=(2,4), N=(1,2) and M=(2,5), N=(1,3).
  std::vector<ParamSystem> regimes;
  std::size_t norm_samples = 500;
};

/// Certificate re-evaluations performed by the suite so far, and failures.
struct CertificateLedger {
  std::atomic<std::size_t> checked{0};
  std::atomic<std::size_t> failed{0};
  void record(bool ok) {
    ++checked;
    if (!ok) ++failed;
  }
};

CertificateLedger& certificates();

Outcome schreier_oracle(const Options& o);             // 1
Outcome schreier_invariants(const Options& o);         // 2
Outcome repeated_average_properties(const Options& o); // 3
/// Oracle equivalence (4) and unconditionality / bimonotonicity (10) share samples.
std::pair<Outcome, Outcome> mixed_norm_oracle(const Options& o);
Outcome pinned_values(const Options& o);               // 5
Outcome decomposition_property(const Options& o);      // 6
Outcome antichain_property(const Options& o);          // 7
Outcome average_tree_bound_property(const Options& o); // 8
Outcome renorm_property(const Options& o);             // 9
Outcome alternating_property(const Options& o);        // 11
Outcome coding_property(const Options& o);             // 12
Outcome certificate_property();                        // 13

/// suite: "all", "schreier", "measures", "norms", "trees", "distortion" or "coding".
std::vector<Outcome> run_suite(const std::string& suite, const Options& o);

}  // namespace tsf::verify
