#pragma once

#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "tsf/core.hpp"
#include "tsf/finset.hpp"
#include "tsf/measures.hpp"
#include "tsf/params.hpp"
#include "tsf/trees.hpp"

namespace tsf {

/// Integer interval [lo, hi] paired with the sign of Σ_{i ∈ J} x(i).
struct SignedInterval {
  Index lo;
  Index hi;
  int sign;
  friend bool operator==(const SignedInterval&, const SignedInterval&) = default;
};

struct NormCertificate {
  Rational value;
  /// monostate only for the zero vector.
  std::variant<std::monostate, FinSet, std::vector<SignedInterval>, ApTree> witness;
};

/// max_{F ∈ S_ξ} Σ_{i ∈ F} |x(i)|.
NormCertificate schreier_norm(const Vector& x, int xi);

/// max over S_ξ-admissible successive intervals of Σ_k |Σ_{i ∈ J_k} x(i)|.
NormCertificate cond_schreier_norm(const Vector& x, int xi);

/// Norm of the mixed Tsirelson space T(1/m_j, S_{n_j}) over the listed weights.
///
/// Interval DP over support positions:
///   v(I) = max( ℓ∞(x|I), max_j (1/m_j) max Σ_k v(E_k) )
/// where E_1 < E_2 < ... cover sub-blocks of I whose first support points form
/// a member of S_{n_j}. When M or N has no tail, weights past the listed ones are
/// unknown; GroundExhausted is thrown if one of them could matter, i.e. if
/// ℓ1(x|I) > (m_last + 1) v(I) for some interval I.
class MixedNorm {
 public:
  MixedNorm(const Vector& x, const ParamSystem& sys);

  const Vector& vector() const noexcept { return x_; }
  std::size_t positions() const noexcept { return labels_.size(); }
  const std::vector<Index>& labels() const noexcept { return labels_; }

  /// ‖x‖; 0 for the zero vector.
  Rational norm() const;
  /// ‖x|{label[lo..hi]}‖ for support positions lo ≤ hi.
  const Rational& value(std::size_t lo, std::size_t hi) const { return value_[lo * n_ + hi]; }
  /// Positive-sign tree with sign-matched terminals attaining value(lo, hi).
  ApTree witness(std::size_t lo, std::size_t hi) const;
  /// Witness for the whole support (requires x ≠ 0).
  ApTree witness() const { return witness(0, n_ - 1); }
  NormCertificate certificate() const;

 private:
  struct Choice {
    std::size_t j = 0;  // 0: terminal at position `term`
    std::size_t term = 0;
    std::vector<std::size_t> starts;
  };

  void solve();

  Vector x_;
  ParamSystem sys_;
  std::vector<Index> labels_;
  std::vector<Rational> abs_;
  std::vector<int> sign_;
  std::size_t n_ = 0;
  std::vector<Rational> value_;
  std::vector<Choice> choice_;
};

NormCertificate mixed_norm(const Vector& x, const ParamSystem& sys);

/// Σ_k ‖x|E_k‖ maximised over S_ξ-admissible successive interval families
/// (a single interval is allowed). Blocks are given as support-position ranges.
struct AdmissibleSum {
  Rational value;
  std::vector<std::pair<std::size_t, std::size_t>> blocks;
};
AdmissibleSum admissible_block_sum(const MixedNorm& dp, int xi);

/// Tree-enumeration oracle for the mixed norm: max of μ_T(|x|) over
/// positive-sign trees with support ⊆ {1..support_bound} and depth ≤ depth_max.
/// Distinct μ profiles are collected once and reused for every vector.
class OracleNorm {
 public:
  static constexpr Index kSupportCap = 8;
  static constexpr std::size_t kDepthCap = 4;

  OracleNorm(const ParamSystem& sys, Index support_bound, std::size_t depth_max);

  std::size_t trees_enumerated() const noexcept { return trees_; }
  std::size_t profiles() const noexcept { return profiles_.size(); }
  Index support_bound() const noexcept { return bound_; }
  std::size_t depth_max() const noexcept { return depth_; }

  /// Requires supp x ⊆ {1..support_bound}.
  Rational evaluate(const Vector& x) const;

 private:
  Index bound_;
  std::size_t depth_;
  std::size_t trees_ = 0;
  mpz_class denom_;                           // common denominator of all profile entries
  std::vector<std::vector<std::int64_t>> profiles_;  // numerators over denom_, indexed 0..bound-1
};

Rational oracle_norm(const Vector& x, const ParamSystem& sys, std::size_t depth_max);

struct FunctionalChoice {
  Rational value;
  std::size_t index;  // into the supplied list
};

/// max_T μ_T(x) over a nonempty finite family of trees.
FunctionalChoice functional_set_norm(const Vector& x, const std::vector<ApTree>& funcs);

// Independent re-evaluation of certificates: recompute the claimed value from
// the witness alone and check the witness is admissible.
bool check_schreier(const Vector& x, int xi, const NormCertificate& c);
bool check_cond(const Vector& x, int xi, const NormCertificate& c);
bool check_mixed(const Vector& x, const ParamSystem& sys, const NormCertificate& c);

}  // namespace tsf
