#include "tsf/distortion.hpp"

#include <algorithm>

#include "tsf/schreier.hpp"

namespace tsf {

namespace {

Vector scaled(const Vector& x, const Rational& c) { return x.scale(c); }

Rational norm_of(const Vector& x, const ParamSystem& sys) { return MixedNorm(x, sys).norm(); }

int order(Index n) {
  if (n < 0 || n > schreier::kDefaultOrderCap) fail(ErrorKind::CapExceeded, "Schreier order " + std::to_string(n) + " out of range");
  return static_cast<int>(n);
}

// Σ w(p_n) u_n for a measure w supported on block minima.
std::pair<Vector, std::vector<std::size_t>> combine(const BlockBasis& blocks, const Measure& w) {
  const auto& mins = blocks.mins();
  Vector out;
  std::vector<std::size_t> used;
  for (const auto& [p, c] : w.entries()) {
    auto it = std::lower_bound(mins.begin(), mins.end(), p);
    if (it == mins.end()) fail(ErrorKind::GroundExhausted, "not enough blocks: ground needs p = " + std::to_string(p));
    if (*it != p) fail(ErrorKind::GroundMismatch, std::to_string(p) + " is not the minimum of a block");
    const auto n = static_cast<std::size_t>(it - mins.begin());
    out.append_scaled(blocks.blocks()[n], c);
    used.push_back(n);
  }
  return {std::move(out), std::move(used)};
}

Rational bound_of(const Measure& w, int xi) { return xi == 0 ? Rational(0) : schreier_value(w, xi - 1).value; }

std::size_t first_weight_with_order(const ParamSystem& sys, Index xi) {
  const std::size_t count = std::min<std::size_t>(sys.weight_count(), sys.M().prefix().size() + 64);
  for (std::size_t j = 1; j <= count && sys.has_weight(j); ++j)
    if (sys.n(j) == xi) return j;
  return 0;
}

SetFamily root_family(const std::vector<ApTree>& trees) {
  std::vector<FinSet> sets;
  for (const auto& t : trees) sets.push_back(t.I);
  return SetFamily(std::move(sets));
}

bool admissible_trees(const std::vector<ApTree>& trees, Index p) {
  if (trees.empty()) return true;
  return schreier::is_admissible(root_family(trees), 1, order(p));
}

Check check(std::string name, bool pass, std::string detail = {}) { return {std::move(name), pass, std::move(detail)}; }

// The (ε, ξ) generic-average hypotheses for u over `blocks`.
void average_hypotheses(const BlockBasis& blocks, const AverageReport& u, int xi, const ParamSystem& sys,
                        std::vector<Check>& out) {
  bool normalized = blocks.normalized();
  for (const auto& b : blocks.blocks())
    if (normalized && norm_of(b, sys) != 1) normalized = false;
  out.push_back(check("blocks normalized", normalized));
  out.push_back(check("average order", u.xi == xi, std::to_string(u.xi) + " vs " + std::to_string(xi)));
  bool shape = false;
  try {
    const std::vector<Index> supp(u.weights.support().begin(), u.weights.support().end());
    shape = !supp.empty() && repeated_average(u.xi, GroundSet(supp), 1) == u.weights &&
            combine(blocks, u.weights).first == u.vector;
  } catch (const Error&) {
    shape = false;
  }
  out.push_back(check("vector is Σ ξ_1^R(p_n) u_n", shape));
  const Rational achieved = bound_of(u.weights, u.xi);
  out.push_back(check("‖ξ_1^R‖_{ξ-1} < ε", achieved == u.achieved && achieved < u.eps, format(achieved)));
}

void tree_hypotheses(const std::vector<ApTree>& trees, Index p, const ParamSystem& sys, std::vector<Check>& out) {
  bool valid = true;
  for (const auto& t : trees) valid = valid && tree_violations(t, sys).empty();
  out.push_back(check("trees appropriate", valid));
  bool adm = false;
  if (valid) {
    try {
      adm = admissible_trees(trees, p);
    } catch (const Error&) {
      adm = false;
    }
  }
  out.push_back(check("trees successive and admissible", adm, "S_" + std::to_string(p)));
}

bool all_pass(const std::vector<Check>& cs) {
  return std::all_of(cs.begin(), cs.end(), [](const Check& c) { return c.pass; });
}

Rational sum_pairs(const std::vector<ApTree>& trees, const Vector& x) {
  Rational s = 0;
  for (const auto& t : trees) s += pair(mu_of(t), x);
  return s;
}

}  // namespace

// ---------------------------------------------------------------------------

BlockBasis::BlockBasis(std::vector<Vector> blocks, bool normalized)
    : blocks_(std::move(blocks)), normalized_(normalized) {
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    if (blocks_[k].empty()) fail(ErrorKind::NotSuccessive, "block " + std::to_string(k + 1) + " is zero");
    if (k > 0 && blocks_[k - 1].max_index() >= blocks_[k].min_index())
      fail(ErrorKind::NotSuccessive, "blocks " + std::to_string(k) + " and " + std::to_string(k + 1) + " overlap");
    mins_.push_back(blocks_[k].min_index());
  }
}

BlockBasis BlockBasis::normalize(std::vector<Vector> blocks, const ParamSystem& sys) {
  for (auto& b : blocks) {
    if (b.empty()) fail(ErrorKind::NotSuccessive, "zero block");
    b = scaled(b, 1 / norm_of(b, sys));
  }
  return BlockBasis(std::move(blocks), true);
}

BlockBasis BlockBasis::units(Index start, Index step, std::size_t count) {
  if (start < 1 || step < 1) fail(ErrorKind::Input, "units need start ≥ 1 and step ≥ 1");
  std::vector<Vector> out;
  for (std::size_t k = 0; k < count; ++k) out.push_back(Vector::unit(start + static_cast<Index>(k) * step));
  return BlockBasis(std::move(out), true);
}

BlockBasis BlockBasis::after(Index x) const {
  std::vector<Vector> rest;
  for (const auto& b : blocks_)
    if (b.min_index() > x) rest.push_back(b);
  return BlockBasis(std::move(rest), normalized_);
}

// ---------------------------------------------------------------------------

AverageReport generic_average(const BlockBasis& blocks, const Rational& eps, int xi, const GroundSet& r,
                              const ParamSystem* sys) {
  if (blocks.size() == 0) fail(ErrorKind::GroundExhausted, "no blocks");
  AverageReport out;
  out.xi = xi;
  out.eps = eps;
  out.weights = repeated_average(xi, r, 1);
  out.achieved = bound_of(out.weights, xi);
  if (xi > 0 && out.achieved >= eps)
    fail(ErrorKind::BoundViolated, "‖ξ_1^R‖_{ξ-1} = " + format(out.achieved) + " ≥ " + format(eps));
  auto [v, used] = combine(blocks, out.weights);
  out.vector = std::move(v);
  out.used = std::move(used);
  if (sys) {
    out.norm = norm_of(out.vector, *sys);
    if (const std::size_t j = first_weight_with_order(*sys, xi); j != 0 && blocks.normalized()) {
      if (*out.norm > 1 || *out.norm < sys->delta(j))
        fail(ErrorKind::Internal, "average norm " + format(*out.norm) + " outside [1/m_j, 1]");
    }
  }
  return out;
}

GroundSet select_ground(const BlockBasis& blocks, const Rational& eps, int xi) {
  const auto& mins = blocks.mins();
  for (std::size_t k = 0; k < mins.size(); ++k) {
    GroundSet r(std::vector<Index>(mins.begin() + static_cast<std::ptrdiff_t>(k), mins.end()));
    if (xi == 0) return r;
    Measure w = repeated_average(xi, r, 1);  // GroundExhausted once the tail is too short
    if (bound_of(w, xi) < eps) return r;
  }
  fail(ErrorKind::GroundExhausted, "no tail of the block minima meets the bound " + format(eps));
}

RoundsExhaustedError::RoundsExhaustedError(std::vector<RoundRecord> rounds)
    : Error(ErrorKind::RoundsExhausted,
            "RoundsExhausted: no average of norm ≥ 1/2 after " + std::to_string(rounds.size()) + " rounds"),
      rounds_(std::move(rounds)) {}

SmoothAverage smooth_average_search(const BlockBasis& blocks, const Rational& eps, std::size_t j,
                                    const ParamSystem& sys, std::optional<std::size_t> max_rounds) {
  if (!blocks.normalized()) fail(ErrorKind::Precondition, "blocks must be normalized");
  if (blocks.size() == 0) fail(ErrorKind::GroundExhausted, "no blocks");
  SmoothAverage out;
  if (blocks.size() == 1) {
    out.report.vector = blocks.blocks()[0];
    out.report.weights = Measure::unit(blocks.mins()[0]);
    out.report.used = {0};
    out.report.eps = eps;
    out.report.norm = norm_of(out.report.vector, sys);
    out.rounds.push_back({1, {blocks.mins()[0]}, *out.report.norm});
    return out;
  }
  const int xi = order(sys.f(j) + 1);
  const std::size_t limit = max_rounds ? *max_rounds : static_cast<std::size_t>(sys.l(j));
  if (limit == 0) fail(ErrorKind::Input, "at least one round is required");
  BlockBasis cur = blocks;
  for (std::size_t r = 1; r <= limit; ++r) {
    AverageReport avg = generic_average(cur, eps, xi, select_ground(cur, eps, xi), &sys);
    const auto supp = avg.weights.support();
    out.rounds.push_back({r, std::vector<Index>(supp.begin(), supp.end()), *avg.norm});
    if (*avg.norm >= Rational(1, 2)) {
      avg.rounds = r;
      out.report = std::move(avg);
      return out;
    }
    if (r == limit) break;
    // Next round: u_i^r = Σ_n ξ_i^P(p_n) u_n, renormalized.
    std::vector<Vector> next;
    GroundSet g(cur.mins());
    for (;;) {
      Measure w;
      try {
        w = repeated_average(xi, g, 1);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::GroundExhausted) throw;
        break;
      }
      next.push_back(combine(cur, w).first);
      g = g.after(w.max_index());
    }
    if (next.empty()) fail(ErrorKind::GroundExhausted, "blocks exhausted in round " + std::to_string(r + 1));
    cur = BlockBasis::normalize(std::move(next), sys);
  }
  throw RoundsExhaustedError(std::move(out.rounds));
}

// ---------------------------------------------------------------------------

Measure AFunctional::measure(const ParamSystem& sys) const {
  Measure out;
  for (const auto& t : parts) out = out + mu_of(t);
  return out.scale(sys.delta(j));
}

Rational AFunctional::apply(const Vector& x, const ParamSystem& sys) const { return pair(measure(sys), x); }

std::vector<std::string> AFunctional::violations(const ParamSystem& sys) const {
  std::vector<std::string> out;
  for (std::size_t k = 0; k < parts.size(); ++k)
    for (const auto& v : tree_violations(parts[k], sys)) out.push_back("part " + std::to_string(k + 1) + ": " + v);
  if (!out.empty()) return out;
  try {
    if (!admissible_trees(parts, sys.n(j))) out.push_back("parts not S_" + std::to_string(sys.n(j)) + "-admissible");
  } catch (const Error& e) {
    out.push_back(e.what());
  }
  return out;
}

Renorm renorm(const Vector& x, std::size_t j, const ParamSystem& sys) {
  Renorm out;
  out.functional.j = j;
  const Rational delta = sys.delta(j);
  if (x.empty()) return out;
  MixedNorm dp(x, sys);
  out.norm = dp.norm();
  const AdmissibleSum best = admissible_block_sum(dp, order(sys.n(j)));
  for (const auto& [a, b] : best.blocks) out.functional.parts.push_back(dp.witness(a, b));
  out.sup = delta * best.value;
  out.value = delta * out.norm + out.sup;
  return out;
}

AFunctional average_functional(const BlockBasis& blocks, const AverageReport& avg, std::size_t j,
                               const ParamSystem& sys) {
  if (avg.xi != sys.n(j)) fail(ErrorKind::Precondition, "average order differs from n_j");
  AFunctional out;
  out.j = j;
  for (std::size_t n : avg.used) out.parts.push_back(MixedNorm(blocks.blocks().at(n), sys).witness());
  return out;
}

PairReport distortion_pair(const BlockBasis& blocks, std::size_t j0, std::size_t j, const ParamSystem& sys,
                           const Rational& d) {
  if (j0 < 1 || j0 >= j) fail(ErrorKind::Precondition, "need 1 ≤ j0 < j");
  if (!blocks.normalized()) fail(ErrorKind::Precondition, "blocks must be normalized");
  if (d <= 1) fail(ErrorKind::Input, "d must exceed 1");
  PairReport out;
  out.j0 = j0;
  out.j = j;
  out.d = d;
  const Rational d0 = sys.delta(j0);

  const int xi0 = order(sys.n(j0));
  out.v0 = generic_average(blocks, d0, xi0, select_ground(blocks, d0, xi0), &sys);
  out.v = out.v0.vector.scale(1 / *out.v0.norm);
  out.x0 = average_functional(blocks, out.v0, j0, sys);
  out.x0_value = out.x0.apply(out.v0.vector, sys);
  if (!out.x0.violations(sys).empty() || out.x0_value < d0)
    fail(ErrorKind::Internal, "constructed 𝒜_{j0} functional fails on v0");

  // Blocks where the norming functional of v0 is large, and their admissibility degree.
  const ApTree xstar = MixedNorm(out.v0.vector, sys).witness();
  const Measure mu = mu_of(xstar);
  std::vector<Index> big;
  for (std::size_t n : out.v0.used)
    if (abs(pair(mu, blocks.blocks()[n])) >= 8 * d * d0) big.push_back(blocks.mins()[n]);
  out.vx_count = big.size();
  if (!big.empty()) {
    const FinSet f(big);
    while (!schreier::is_member(f, order(out.vx_degree))) ++out.vx_degree;
  }

  const Rational dj = sys.delta(j);
  const int xi = order(sys.n(j));
  const BlockBasis rest = blocks.after(out.v0.vector.max_index());
  out.w0 = generic_average(rest, dj * dj, xi, select_ground(rest, dj * dj, xi), &sys);
  out.w = out.w0.vector.scale(1 / *out.w0.norm);

  out.v_renorm = renorm(out.v, j0, sys);
  out.w_renorm = renorm(out.w, j0, sys);
  out.ratio = out.v_renorm.value / out.w_renorm.value;
  out.target_v = 1 / (8 * d + 1);
  out.target_w = (8 * d + 5) * d0;
  out.target_ratio = 1 / ((8 * d + 1) * (8 * d + 5) * d0);
  out.v_meets = out.v_renorm.value >= out.target_v;
  out.w_meets = out.w_renorm.value <= out.target_w;
  out.ratio_meets = out.ratio >= out.target_ratio;
  return out;
}

// ---------------------------------------------------------------------------

HiReport hi_check(const std::vector<Vector>& zs, std::size_t j, const HiConstants& c, Index k_j, Index n_j,
                  const Rational& delta_j, const ParamSystem& sys, const NormFn& norm) {
  (void)j;
  const BlockBasis basis(zs);
  if (basis.size() == 0) fail(ErrorKind::Input, "empty block sequence");
  const NormFn nf = norm ? norm : NormFn([&](const Vector& x) { return norm_of(x, sys); });
  HiReport out;
  out.t = basis.mins();
  const FinSet t(out.t);
  const int n = order(n_j);
  out.maximal = schreier::is_member(t, n) && schreier::is_maximal_member(t, n);
  if (out.maximal) {
    const Measure w = repeated_average(n, GroundSet(out.t), 1);
    if (w.support() == t) {
      out.repeated_average = true;
      for (Index p : out.t) out.a.push_back(w.at(p));
    }
  }
  if (!out.repeated_average) out.a.assign(out.t.size(), Rational(1, static_cast<long>(out.t.size())));

  Vector sum_z, alt_z;
  std::vector<Vector::Entry> e, alt_e;
  for (std::size_t i = 0; i < zs.size(); ++i) {
    const Rational sign = (i + 1) % 2 == 0 ? 1 : -1;  // (-1)^i, 1-based
    sum_z.append_scaled(zs[i], out.a[i]);
    alt_z.append_scaled(zs[i], sign * out.a[i]);
    e.emplace_back(out.t[i], out.a[i]);
    alt_e.emplace_back(out.t[i], sign * out.a[i]);
  }
  out.lower_lhs = nf(sum_z);
  out.lower_rhs = c.c1 * delta_j * schreier_norm(Vector::from_entries(e), n).value;
  out.upper_lhs = nf(alt_z);
  out.upper_rhs = c.c2 * cond_schreier_norm(Vector::from_entries(alt_e), order(k_j)).value + c.c3 * delta_j * delta_j;
  out.cond1 = out.maximal && out.lower_lhs >= out.lower_rhs;
  out.cond2 = out.upper_lhs <= out.upper_rhs;
  return out;
}

// ---------------------------------------------------------------------------

BoundCheck average_tree_bound(const BlockBasis& blocks, const AverageReport& u, std::size_t j,
                              const std::vector<ApTree>& trees, std::size_t i, const ParamSystem& sys) {
  BoundCheck out;
  out.bound = 2;
  auto& h = out.hypotheses;
  h.push_back(check("j ≥ 2", j >= 2));
  h.push_back(check("i < j", i >= 1 && i < j));
  if (all_pass(h)) {
    h.push_back(check("ε < 1/(2 m_j)", u.eps < Rational(1, 2 * sys.m(j)), format(u.eps)));
    average_hypotheses(blocks, u, static_cast<int>(sys.f(j) + 1), sys, h);
    tree_hypotheses(trees, sys.n(i), sys, h);
  }
  out.applicable = all_pass(h);
  out.value = sum_pairs(trees, u.vector);
  out.holds = out.value <= out.bound;
  return out;
}

Thinning growth_thinning(const std::vector<std::pair<std::size_t, Vector>>& ys, std::size_t j0,
                         const ParamSystem& sys) {
  for (std::size_t k = 1; k < ys.size(); ++k)
    if (ys[k - 1].first >= ys[k].first) fail(ErrorKind::Input, "indices must increase");
  Thinning out;
  std::size_t k = 0;
  while (k < ys.size() && ys[k].first <= j0) ++k;
  if (k == ys.size()) return out;
  out.chosen.push_back(k++);
  if (k < ys.size()) out.chosen.push_back(k++);
  while (out.chosen.size() >= 2) {
    const auto& [jp, yp] = ys[out.chosen.back()];
    const Rational need = yp.l1() * sys.m(jp);
    while (k < ys.size() && Rational(sys.m(ys[k].first)) <= need) ++k;
    if (k == ys.size()) break;
    out.chosen.push_back(k++);
  }
  for (std::size_t s = 1; s + 1 < out.chosen.size(); ++s) {
    const auto& [ja, ya] = ys[out.chosen[s]];
    const std::size_t jb = ys[out.chosen[s + 1]].first;
    const Rational rhs(sys.m(jb), sys.m(ja));
    out.checks.push_back(check("ℓ1 growth at " + std::to_string(ja), ya.l1() < rhs, format(ya.l1()) + " < " + format(rhs)));
  }
  return out;
}

namespace {

// Every G ⊆ p that is a union of 4 members of S_f lies in S_{f+1}.
bool four_union_property(const std::vector<Index>& p, int f) {
  if (p.size() > 16) return false;
  const std::size_t n = p.size();
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    std::vector<Index> g;
    for (std::size_t b = 0; b < n; ++b)
      if (mask >> b & 1) g.push_back(p[b]);
    const FinSet s(std::move(g));
    if (schreier::is_union_of_members(s, 4, f) && !schreier::is_member(s, f + 1)) return false;
  }
  return true;
}

}  // namespace

BoundCheck small_weight_bound(const std::vector<SmoothBlock>& ys, const AverageReport& u, std::size_t j0,
                              const std::vector<ApTree>& g0, std::size_t i, const ParamSystem& sys) {
  BoundCheck out;
  auto& h = out.hypotheses;
  h.push_back(check("i < j0", i >= 1 && i < j0));
  h.push_back(check("ε ≤ 1/(12 m_{j0}²)", u.eps <= Rational(1, 12 * sys.m(j0) * sys.m(j0)), format(u.eps)));
  h.push_back(check("G0 avoids weight m_{j0}",
                    std::none_of(g0.begin(), g0.end(), [&](const ApTree& t) { return weight(t) == sys.m(j0); })));
  std::vector<Vector> normalized;
  std::vector<std::pair<std::size_t, Vector>> indexed;
  bool smooth = !ys.empty();
  for (const auto& y : ys) {
    std::vector<Check> sub;
    const Rational eps_j = y.average.eps;
    sub.push_back(check("ε_j < 1/(2 m_j)", eps_j < Rational(1, 2 * sys.m(y.j))));
    average_hypotheses(y.source, y.average, static_cast<int>(sys.f(y.j) + 1), sys, sub);
    const Rational nv = norm_of(y.average.vector, sys);
    sub.push_back(check("‖y‖ ≥ 1/2", nv >= Rational(1, 2)));
    smooth = smooth && all_pass(sub);
    normalized.push_back(y.average.vector.scale(1 / nv));
    indexed.emplace_back(y.j, normalized.back());
  }
  h.push_back(check("y_j smoothly normalized (ε_j, f_j+1) averages", smooth));
  if (smooth) {
    const Thinning th = growth_thinning(indexed, j0, sys);
    bool same = th.chosen.size() == ys.size() && all_pass(th.checks);
    h.push_back(check("y_j survive growth thinning", same));
    BlockBasis ybasis(normalized, true);
    h.push_back(check("4-fold unions of S_{f_{j0}} sets lie in S_{f_{j0}+1}",
                      four_union_property(ybasis.mins(), order(sys.f(j0)))));
    average_hypotheses(ybasis, u, order(sys.n(j0)), sys, h);
  }
  tree_hypotheses(g0, i >= 1 ? sys.n(i) : 0, sys, h);
  out.applicable = all_pass(h);
  Index me = sys.m(j0);
  for (const auto& t : g0) me = std::min(me, weight(t));
  out.bound = Rational(6, me);
  if (!u.vector.empty()) out.value = abs(sum_pairs(g0, u.vector.scale(1 / norm_of(u.vector, sys))));
  out.holds = out.value <= out.bound;
  return out;
}

}  // namespace tsf
