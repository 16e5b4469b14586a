#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tsf/core.hpp"
#include "tsf/measures.hpp"
#include "tsf/norms.hpp"
#include "tsf/params.hpp"
#include "tsf/trees.hpp"

namespace tsf {

/// Successive blocks u_1 < u_2 < ... of the unit vector basis.
class BlockBasis {
 public:
  BlockBasis() = default;
  /// Throws NotSuccessive unless supports are nonempty and successive.
  explicit BlockBasis(std::vector<Vector> blocks, bool normalized = false);
  /// Scales every block to mixed norm 1.
  static BlockBasis normalize(std::vector<Vector> blocks, const ParamSystem& sys);
  /// Unit vectors e_{start}, e_{start+step}, ... (already normalized).
  static BlockBasis units(Index start, Index step, std::size_t count);

  const std::vector<Vector>& blocks() const noexcept { return blocks_; }
  std::size_t size() const noexcept { return blocks_.size(); }
  bool normalized() const noexcept { return normalized_; }
  /// p_n = min supp u_n.
  const std::vector<Index>& mins() const noexcept { return mins_; }
  /// Blocks whose support lies strictly after x.
  BlockBasis after(Index x) const;

 private:
  std::vector<Vector> blocks_;
  std::vector<Index> mins_;
  bool normalized_ = false;
};

struct AverageReport {
  Vector vector;
  Measure weights;                  // ξ_1^R, supported on {p_n}
  std::vector<std::size_t> used;    // block positions n with ξ_1^R(p_n) > 0
  int xi = 0;
  Rational eps;
  Rational achieved;                // ‖ξ_1^R‖_{ξ-1} (0 when ξ = 0)
  std::optional<Rational> norm;     // mixed norm, when a system was supplied
  std::size_t rounds = 1;
};

/// Σ ξ_1^R(p_n) u_n. R must be a subset of {p_n}; only its first S_ξ-maximal
/// prefix is used. With sys, the mixed norm is attached and, for ξ = n_j and
/// normalized blocks, 1/m_j ≤ ‖u‖ ≤ 1 is asserted.
AverageReport generic_average(const BlockBasis& blocks, const Rational& eps, int xi, const GroundSet& r,
                              const ParamSystem* sys = nullptr);

/// Least tail R = {p_k, p_{k+1}, ...} of the block minima with ‖ξ_1^R‖_{ξ-1} < eps.
GroundSet select_ground(const BlockBasis& blocks, const Rational& eps, int xi);

struct RoundRecord {
  std::size_t round;
  std::vector<Index> ground;  // supp ξ_1^R of the attempted average
  Rational norm;
};

class RoundsExhaustedError : public Error {
 public:
  explicit RoundsExhaustedError(std::vector<RoundRecord> rounds);
  const std::vector<RoundRecord>& rounds() const noexcept { return rounds_; }

 private:
  std::vector<RoundRecord> rounds_;
};

struct SmoothAverage {
  AverageReport report;
  std::vector<RoundRecord> rounds;
};

/// Iterated search for a generic (eps, f_j + 1) average of norm ≥ 1/2. A failed
/// round replaces the blocks by their normalized repeated averages
/// Σ_n ξ_i^P(p_n) u_n and retries, for at most max_rounds (default l_j) rounds.
SmoothAverage smooth_average_search(const BlockBasis& blocks, const Rational& eps, std::size_t j,
                                    const ParamSystem& sys, std::optional<std::size_t> max_rounds = std::nullopt);

/// δ_j Σ_k μ_{T_k} over successive S_{n_j}-admissible trees: a member of 𝒜_j.
struct AFunctional {
  std::size_t j = 0;
  std::vector<ApTree> parts;

  Measure measure(const ParamSystem& sys) const;
  Rational apply(const Vector& x, const ParamSystem& sys) const;
  /// Every part valid, parts successive and S_{n_j}-admissible.
  std::vector<std::string> violations(const ParamSystem& sys) const;
};

struct Renorm {
  Rational value;  // ‖x‖_j
  Rational norm;   // ‖x‖
  Rational sup;    // sup over 𝒜_j
  AFunctional functional;  // attains sup
};

/// ‖x‖_j = δ_j ‖x‖ + sup{x*(x) : x* ∈ 𝒜_j}.
Renorm renorm(const Vector& x, std::size_t j, const ParamSystem& sys);

/// For a generic average of normalized blocks with ξ = n_j: δ_j Σ (norming tree of
/// each used block). Evaluates to δ_j on the average.
AFunctional average_functional(const BlockBasis& blocks, const AverageReport& avg, std::size_t j,
                               const ParamSystem& sys);

struct PairReport {
  std::size_t j0 = 0, j = 0;
  Rational d;
  AverageReport v0, w0;
  Vector v, w;
  Renorm v_renorm, w_renorm;
  Rational ratio;            // ‖v‖_{j0} / ‖w‖_{j0}
  Rational target_v;         // 1/(8d+1)
  Rational target_w;         // (8d+5) δ_{j0}
  Rational target_ratio;     // 1/((8d+1)(8d+5)δ_{j0})
  bool v_meets = false, w_meets = false, ratio_meets = false;
  AFunctional x0;            // x0*(v0) ≥ δ_{j0}
  Rational x0_value;
  std::size_t vx_count = 0;  // blocks of v0 with |x*(v_i)| ≥ 8dδ_{j0}, x* norming v0
  Index vx_degree = 0;       // least p with that family S_p-admissible
};

PairReport distortion_pair(const BlockBasis& blocks, std::size_t j0, std::size_t j, const ParamSystem& sys,
                           const Rational& d);

struct HiConstants {
  Rational c1, c2, c3;
};

struct HiReport {
  std::vector<Index> t;
  std::vector<Rational> a;
  bool repeated_average = false;  // a = [n]_1^L with supp = {t_i}; otherwise uniform
  bool maximal = false;
  Rational lower_lhs, lower_rhs;  // ‖Σ a_i z_i‖ vs c1 δ ‖Σ a_i e_{t_i}‖_n
  Rational upper_lhs, upper_rhs;  // ‖Σ (-1)^i a_i z_i‖ vs c2 ‖Σ (-1)^i a_i e_{t_i}‖_{Ck} + c3 δ²
  bool cond1 = false;
  bool cond2 = false;
};

using NormFn = std::function<Rational(const Vector&)>;

/// Checks both conditions of the HI criterion on a finite block sequence. The
/// norm defaults to the mixed norm of sys.
HiReport hi_check(const std::vector<Vector>& zs, std::size_t j, const HiConstants& c, Index k_j, Index n_j,
                  const Rational& delta_j, const ParamSystem& sys, const NormFn& norm = {});

/// Outcome of a bound check whose hypotheses are verified first.
struct BoundCheck {
  std::vector<Check> hypotheses;
  bool applicable = false;  // all hypotheses hold
  Rational value;
  Rational bound;
  bool holds = false;       // value ≤ bound
};

/// Σ_k μ_{T_k}(u) ≤ 2 for u a generic (ε, f_j+1) average of normalized blocks,
/// ε < 1/(2m_j), and S_{n_i}-admissible trees with i < j.
BoundCheck average_tree_bound(const BlockBasis& blocks, const AverageReport& u, std::size_t j,
                              const std::vector<ApTree>& trees, std::size_t i, const ParamSystem& sys);

struct Thinning {
  std::vector<std::size_t> chosen;  // indices j_1 < j_2 < ... into the input
  std::vector<Check> checks;        // ℓ1 growth per consecutive pair
};

/// Deterministic thinning of (j, y_j) pairs: j_1 > j0, then each next index is the
/// least one with ‖y_{j_i}‖_{ℓ1} < m_{j_{i+1}} / m_{j_i} (required from i ≥ 2).
Thinning growth_thinning(const std::vector<std::pair<std::size_t, Vector>>& ys, std::size_t j0,
                         const ParamSystem& sys);

struct SmoothBlock {
  std::size_t j;         // y_j is a smoothly normalized (ε_j, f_j+1) average
  BlockBasis source;     // the blocks it averages
  AverageReport average; // before normalization
};

/// |Σ_{T ∈ G0} μ_T(u)| ≤ 6/m_e for u a normalized (ε, n_{j0}) average of thinned
/// smoothly normalized (ε_j, f_j+1) averages, ε ≤ 1/(12 m_{j0}²), and G0
/// S_{n_i}-admissible with i < j0 and no tree of weight m_{j0}.
BoundCheck small_weight_bound(const std::vector<SmoothBlock>& ys, const AverageReport& u, std::size_t j0,
                              const std::vector<ApTree>& g0, std::size_t i, const ParamSystem& sys);

}  // namespace tsf
