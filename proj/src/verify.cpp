#include "tsf/verify.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "tsf/coding.hpp"
#include "tsf/distortion.hpp"
#include "tsf/norms.hpp"
#include "tsf/schreier.hpp"

namespace tsf::verify {

namespace {

using Elems = std::vector<Index>;

struct MemoKey {
  Elems elems;
  int xi;
  friend auto operator<=>(const MemoKey&, const MemoKey&) = default;
};

bool member_rec(const Elems& f, int xi, std::map<MemoKey, bool>& memo);

// Can f[pos..] be split into at most `left` consecutive runs, each in S_{xi-1}?
bool split_rec(const Elems& f, std::size_t pos, Index left, int xi, std::map<MemoKey, bool>& memo) {
  if (pos == f.size()) return true;
  if (left <= 0) return false;
  for (std::size_t end = f.size(); end > pos; --end) {
    const Elems run(f.begin() + static_cast<std::ptrdiff_t>(pos), f.begin() + static_cast<std::ptrdiff_t>(end));
    if (member_rec(run, xi - 1, memo) && split_rec(f, end, left - 1, xi, memo)) return true;
  }
  return false;
}

bool member_rec(const Elems& f, int xi, std::map<MemoKey, bool>& memo) {
  if (f.empty()) return true;
  if (xi == 0) return f.size() == 1;
  MemoKey key{f, xi};
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  const bool r = split_rec(f, 0, f.front(), xi, memo);
  memo.emplace(std::move(key), r);
  return r;
}

std::map<MemoKey, bool>& shared_memo() {
  thread_local std::map<MemoKey, bool> memo;
  return memo;
}

std::string str(const FinSet& f) {
  std::ostringstream os;
  os << f;
  return os.str();
}

std::string vec_str(const Vector& x) {
  std::string s = "{";
  for (const auto& [i, v] : x.entries()) s += (s.size() > 1 ? ", " : "") + std::to_string(i) + ":" + format(v);
  return s + "}";
}

// Counts checks and keeps the first few failure messages.
struct Tally {
  std::size_t checked = 0;
  std::size_t failed = 0;
  std::vector<std::string> notes;

  void expect(bool ok, const std::string& what) {
    ++checked;
    if (ok) return;
    ++failed;
    if (notes.size() < 3) notes.push_back(what);
  }
  void cert(bool ok, const std::string& what) {
    certificates().record(ok);
    expect(ok, "certificate: " + what);
  }
  std::string summary() const {
    std::string s = std::to_string(checked - failed) + "/" + std::to_string(checked) + " checks";
    for (const auto& n : notes) s += "; " + n;
    return s;
  }
};

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

Outcome finish(int id, std::string name, const Tally& t, const Timer& timer, double budget, std::string extra = {}) {
  Outcome o;
  o.id = id;
  o.name = std::move(name);
  o.seconds = timer.seconds();
  const bool in_time = o.seconds <= budget;
  o.pass = t.failed == 0 && t.checked > 0 && in_time && extra.empty();
  o.detail = t.summary();
  if (!in_time) o.detail += "; over the " + std::to_string(static_cast<int>(budget)) + " s budget";
  if (!extra.empty()) o.detail += "; " + extra;
  return o;
}

std::vector<ParamSystem> regimes_of(const Options& o) {
  if (!o.regimes.empty()) return o.regimes;
  return {ParamSystem::relaxed({2, 4}, {1, 2}), ParamSystem::relaxed({2, 5}, {1, 3})};
}

std::string regime_name(const ParamSystem& sys) {
  auto list = [](const GroundSet& g) {
    std::string s = "(";
    for (std::size_t k = 0; k < g.prefix().size(); ++k) s += (k ? "," : "") + std::to_string(g.prefix()[k]);
    if (g.tail()) s += std::string(g.prefix().empty() ? "" : ",") + "...";
    return s + ")";
  };
  return "M=" + list(sys.M()) + " N=" + list(sys.N());
}

FinSet from_mask(std::uint32_t mask, Index base = 1) {
  Elems e;
  for (Index b = 0; mask >> b; ++b)
    if (mask >> b & 1) e.push_back(base + b);
  return FinSet(std::move(e));
}

template <class T>
T pick(Rng& rng, T lo, T hi) {
  return std::uniform_int_distribution<T>(lo, hi)(rng);
}

bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

std::size_t listed_weights(const ParamSystem& sys) {
  std::size_t k = 0;
  while (k < sys.M().prefix().size() && sys.has_weight(k + 1)) ++k;
  return k;
}

}  // namespace

// ---------------------------------------------------------------------------

bool brute_member(const FinSet& f, int xi) {
  if (xi < 0) fail(ErrorKind::Input, "order must be non-negative");
  const auto e = f.elements();
  return member_rec(Elems(e.begin(), e.end()), xi, shared_memo());
}

bool brute_maximal(const FinSet& f, int xi) {
  if (f.empty() || !brute_member(f, xi)) return false;
  for (Index y = 1; y <= f.max() + 1; ++y) {
    if (f.contains(y)) continue;
    Elems e(f.begin(), f.end());
    e.insert(std::upper_bound(e.begin(), e.end(), y), y);
    if (brute_member(FinSet(std::move(e)), xi)) return false;
  }
  return true;
}

Rational brute_schreier_norm(const Vector& x, int xi) {
  const auto& es = x.entries();
  if (es.size() > 20) fail(ErrorKind::CapExceeded, "brute Schreier norm limited to 20 support points");
  Rational best = 0;
  for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << es.size()); ++mask) {
    Elems f;
    Rational s = 0;
    for (std::size_t b = 0; b < es.size(); ++b)
      if (mask >> b & 1) {
        f.push_back(es[b].first);
        s += abs(es[b].second);
      }
    if (s > best && brute_member(FinSet(std::move(f)), xi)) best = s;
  }
  return best;
}

Rational brute_cond_norm(const Vector& x, int xi) {
  const auto& es = x.entries();
  if (es.size() > 12) fail(ErrorKind::CapExceeded, "brute conditional norm limited to 12 support points");
  // Each support point is skipped, opens a run, or extends the open run. An interval
  // may start anywhere after the previous one; starting at its first support point
  // is optimal by spreading.
  Rational best = 0;
  Elems mins;
  std::vector<Rational> sums;
  auto rec = [&](auto&& self, std::size_t k, bool open) -> void {
    if (k == es.size()) {
      Rational s = 0;
      for (const auto& v : sums) s += abs(v);
      if (s > best && brute_member(FinSet(mins), xi)) best = s;
      return;
    }
    self(self, k + 1, false);
    mins.push_back(es[k].first);
    sums.push_back(es[k].second);
    self(self, k + 1, true);
    sums.pop_back();
    mins.pop_back();
    if (open) {
      sums.back() += es[k].second;
      self(self, k + 1, true);
      sums.back() -= es[k].second;
    }
  };
  rec(rec, 0, false);
  return best;
}

// ---------------------------------------------------------------------------

ApTree random_tree(Rng& rng, const ParamSystem& sys, Index start, std::size_t depth_max, bool signs,
                   std::size_t max_weight_index) {
  std::size_t top = max_weight_index ? max_weight_index : listed_weights(sys);
  if (top == 0 || depth_max == 0) fail(ErrorKind::Input, "random_tree needs a listed weight and positive depth");
  auto sign = [&] { return signs && coin(rng, 0.5) ? -1 : 1; };
  auto gen = [&](auto&& self, Index lo, std::size_t d) -> ApTree {
    if (d == 1 || coin(rng, 0.3)) return ApTree::leaf(lo + pick<Index>(rng, 0, 1), sign());
    const std::size_t j = pick<std::size_t>(rng, 1, top);
    const std::size_t k = pick<std::size_t>(rng, 1, 4);
    std::vector<ApTree> kids;
    Index next = lo;
    for (std::size_t c = 0; c < k; ++c) {
      kids.push_back(self(self, next, d - 1));
      next = kids.back().I.max() + 1 + pick<Index>(rng, 0, 1);
    }
    auto admissible = [&] {
      std::vector<FinSet> sets;
      for (const auto& t : kids) sets.push_back(t.I);
      return schreier::is_admissible(SetFamily(std::move(sets)), 1, static_cast<int>(sys.n(j)));
    };
    while (!admissible()) kids.pop_back();
    return combine(std::move(kids), j, sign(), sys);
  };
  return gen(gen, std::max<Index>(start, 1), depth_max);
}

Vector random_vector(Rng& rng, Index lo, Index hi) {
  static const Rational values[] = {Rational(1), Rational(-1), Rational(1, 2), Rational(-1, 2), Rational(2),
                                    Rational(-2)};
  std::vector<Vector::Entry> es;
  for (Index i = lo; i <= hi; ++i)
    if (coin(rng, 2.0 / 3)) es.emplace_back(i, values[pick<int>(rng, 0, 5)]);
  return Vector::from_entries(std::move(es));
}

CertificateLedger& certificates() {
  static CertificateLedger ledger;
  return ledger;
}

// ---------------------------------------------------------------------------
// 1

Outcome schreier_oracle(const Options&) {
  Timer timer;
  Tally t;
  for (int xi = 0; xi <= 3; ++xi)
    for (std::uint32_t mask = 0; mask < (1u << 14); ++mask) {
      const FinSet f = from_mask(mask);
      const bool brute = brute_member(f, xi);
      const bool fast = schreier::is_member(f, xi);
      t.expect(brute == fast, "membership of " + str(f) + " in S_" + std::to_string(xi) + ": exhaustive " +
                                  (brute ? "yes" : "no") + ", greedy " + (fast ? "yes" : "no"));
      if (xi == 0 || f.empty()) continue;
      const auto g = schreier::greedy_decompose(f, xi);
      bool valid = g.ok() && static_cast<Index>(g.blocks.size()) <= f.min();
      FinSet cover;
      for (std::size_t k = 0; valid && k < g.blocks.size(); ++k) {
        valid = brute_member(g.blocks[k], xi - 1) && (k == 0 || precedes(g.blocks[k - 1], g.blocks[k]));
        cover = cover.unite(g.blocks[k]);
      }
      valid = valid && cover == f;
      t.expect(valid == brute, "greedy decomposition of " + str(f) + " disagrees with exhaustive search");
    }
  return finish(1, "Schreier membership matches exhaustive partition search", t, timer, 30);
}

// ---------------------------------------------------------------------------
// 2

Outcome schreier_invariants(const Options&) {
  Timer timer;
  Tally t;
  constexpr Index top = 12;
  std::vector<std::vector<bool>> in(4, std::vector<bool>(1u << top));
  for (int xi = 0; xi <= 3; ++xi)
    for (std::uint32_t mask = 0; mask < (1u << top); ++mask) in[xi][mask] = schreier::is_member(from_mask(mask), xi);

  for (int xi = 0; xi <= 3; ++xi)
    for (std::uint32_t mask = 1; mask < (1u << top); ++mask) {
      if (!in[xi][mask]) continue;
      // Single removals and single unit shifts generate all subsets and spreads inside {1..12}.
      for (Index b = 0; b < top; ++b) {
        if (!(mask >> b & 1)) continue;
        const std::uint32_t sub = mask & ~(1u << b);
        t.expect(in[xi][sub], "S_" + std::to_string(xi) + " not hereditary at " + str(from_mask(mask)));
        if (b + 1 < top && !(mask >> (b + 1) & 1)) {
          const std::uint32_t spread = sub | (1u << (b + 1));
          t.expect(in[xi][spread], "S_" + std::to_string(xi) + " not spreading at " + str(from_mask(mask)));
        }
      }
    }

  // Sum composition: F_1 < ... < F_n in S_α with {min F_k} in S_β gives ∪F_k in S_{α+β}.
  for (std::uint32_t mask = 1; mask < (1u << top); ++mask) {
    const FinSet f = from_mask(mask);
    const std::size_t n = f.size();
    for (std::uint32_t cuts = 0; cuts < (1u << (n - 1)); ++cuts) {
      std::vector<std::uint32_t> parts{0};
      Elems mins{f[0]};
      for (std::size_t k = 0; k < n; ++k) {
        if (k > 0 && (cuts >> (k - 1) & 1)) {
          parts.push_back(0);
          mins.push_back(f[k]);
        }
        parts.back() |= 1u << (f[k] - 1);
      }
      std::uint32_t mins_mask = 0;
      for (Index m : mins) mins_mask |= 1u << (m - 1);
      for (int a = 0; a <= 3; ++a)
        for (int b = 0; a + b <= 3; ++b) {
          if (!in[b][mins_mask]) continue;
          if (!std::all_of(parts.begin(), parts.end(), [&](std::uint32_t p) { return bool(in[a][p]); })) continue;
          t.expect(in[a + b][mask], "sum composition fails for " + str(f) + " with α=" + std::to_string(a) +
                                        ", β=" + std::to_string(b));
        }
    }
  }
  return finish(2, "Schreier families are hereditary, spreading and sum-composable", t, timer, 60);
}

// ---------------------------------------------------------------------------
// 3

Outcome repeated_average_properties(const Options& o) {
  Timer timer;
  Tally t;
  Rng rng(o.seed ^ 3);
  std::vector<GroundSet> grounds;
  while (grounds.size() < 20) {
    if (coin(rng, 0.5)) {
      grounds.push_back(GroundSet::progression(pick<Index>(rng, 1, 5), pick<Index>(rng, 1, 3)));
    } else {
      Elems prefix;
      Index x = pick<Index>(rng, 1, 4);
      for (int k = pick<int>(rng, 2, 6); k > 0; --k) {
        prefix.push_back(x);
        x += pick<Index>(rng, 1, 4);
      }
      grounds.emplace_back(prefix, GroundSet::Tail{x, pick<Index>(rng, 1, 3)});
    }
  }
  std::size_t infeasible = 0, cells = 0, unbounded = 0;
  std::string first_infeasible, first_unbounded;
  for (const auto& g : grounds)
    for (int xi = 0; xi <= 4; ++xi) {
      // ξ_{n+1}^M is ξ_1 of the ground past supp ξ_n^M.
      std::vector<Measure> avgs;
      GroundSet cur = g;
      try {
        while (avgs.size() < 3) {
          avgs.push_back(repeated_average(xi, cur, 1));
          cur = cur.after(avgs.back().max_index());
        }
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::CapExceeded && e.kind() != ErrorKind::GroundExhausted) throw;
      }
      cells += 3;
      if (avgs.size() == 3 && avgs.back().max_index() < 5000)
        t.expect(repeated_averages(xi, g, 3) == avgs, "batch and incremental averages differ");
      if (avgs.size() < 3) {
        infeasible += 3 - avgs.size();
        if (first_infeasible.empty())
          first_infeasible = "ξ=" + std::to_string(xi) + ", n=" + std::to_string(avgs.size() + 1) +
                             ", min M=" + std::to_string(g.min());
      }
      for (std::size_t n = 1; n <= avgs.size(); ++n) {
        const Measure& mu = avgs[n - 1];
        const std::string cell = "ξ=" + std::to_string(xi) + ", n=" + std::to_string(n) + ", min M=" +
                                 std::to_string(g.min());
        t.cert(mu.total() == 1, "total mass of " + cell);
        const FinSet supp = mu.support();
        const auto pool = g.take(static_cast<std::size_t>(supp.max()));
        const bool in_ground = std::all_of(supp.begin(), supp.end(), [&](Index i) {
          return std::binary_search(pool.begin(), pool.end(), i);
        });
        t.expect(in_ground, "support leaves the ground set at " + cell);
        t.expect(schreier::is_maximal_member(supp, xi), "support not maximal in S_ξ at " + cell);
        if (supp.size() <= 12) t.expect(brute_maximal(supp, xi), "support not maximal (exhaustive) at " + cell);
        bool mono = true;
        for (std::size_t k = 1; k < mu.entries().size(); ++k)
          mono = mono && mu.entries()[k - 1].second >= mu.entries()[k].second;
        t.expect(mono, "weights increase at " + cell);
        if (n > 1) t.expect(precedes(avgs[n - 2].support(), supp), "averages not successive at " + cell);
        if (n == 1 && xi >= 1) {
          SchreierValue sv;
          try {
            sv = schreier_value(mu, xi - 1);
          } catch (const Error& e) {
            if (e.kind() != ErrorKind::CapExceeded) throw;
            ++unbounded;
            if (first_unbounded.empty()) first_unbounded = cell;
            continue;
          }
          Rational s = 0;
          for (Index i : sv.witness) s += mu.at(i);
          t.cert(s == sv.value && schreier::is_member(sv.witness, xi - 1), "‖·‖_{ξ-1} witness at " + cell);
          t.expect(sv.value <= Rational(xi, g.min()), "‖ξ_1‖_{ξ-1} = " + format(sv.value) + " exceeds ξ/min M at " + cell);
        }
      }
    }
  std::string extra;
  if (infeasible)
    extra = std::to_string(infeasible) + "/" + std::to_string(cells) +
            " cells exceed the support cap (first: " + first_infeasible + ")";
  if (unbounded)
    extra += std::string(extra.empty() ? "" : "; ") + std::to_string(unbounded) +
             " norm bounds exceed the state cap (first: " + first_unbounded + ")";
  return finish(3, "Repeated averages: mass, maximal support, monotone weights, norm bound", t, timer, 30, extra);
}

// ---------------------------------------------------------------------------
// 4 and 10

std::pair<Outcome, Outcome> mixed_norm_oracle(const Options& o) {
  Timer timer;
  Tally eq, inv;
  Rng rng(o.seed ^ 4);
  for (const auto& sys : regimes_of(o)) {
    const std::string rn = regime_name(sys);
    const OracleNorm oracle(sys, 8, 4);
    for (std::size_t s = 0; s < o.norm_samples; ++s) {
      Vector x = random_vector(rng, 2, 8);
      if (x.empty()) x = Vector::unit(pick<Index>(rng, 2, 8), 1);
      const NormCertificate c = mixed_norm(x, sys);
      const Rational expect = oracle.evaluate(x);
      eq.expect(c.value == expect, rn + " x=" + vec_str(x) + ": DP " + format(c.value) + ", oracle " + format(expect));
      eq.cert(check_mixed(x, sys, c), rn + " witness for " + vec_str(x));
      if (const auto* w = std::get_if<ApTree>(&c.witness))
        eq.expect(depth(*w) <= 4, rn + " witness deeper than 4 for " + vec_str(x));

      Vector flipped = Vector::from_entries([&] {
        auto es = x.entries();
        for (auto& [i, v] : es)
          if (coin(rng, 0.5)) v = -v;
        return es;
      }());
      inv.expect(mixed_norm(flipped, sys).value == c.value, rn + " sign flip changes the norm of " + vec_str(x));
      for (const auto& [i, v] : x.entries()) {
        auto es = x.entries();
        es.erase(std::find_if(es.begin(), es.end(), [&](const auto& e) { return e.first == i; }));
        const Vector y = Vector::from_entries(std::move(es));
        const Rational ny = y.empty() ? Rational(0) : mixed_norm(y, sys).value;
        inv.expect(ny <= c.value, rn + " deleting coordinate " + std::to_string(i) + " of " + vec_str(x) + " increases the norm");
      }
    }
  }
  Outcome a = finish(4, "Mixed norm DP matches tree-enumeration oracle", eq, timer, 600);
  Outcome b = finish(10, "Mixed norm is unconditional and bimonotone", inv, timer, 600);
  return {a, b};
}

// ---------------------------------------------------------------------------
// 5

Outcome pinned_values(const Options&) {
  Timer timer;
  Tally t;
  const ParamSystem sys = ParamSystem::relaxed({2, 4}, {1, 2});
  const OracleNorm oracle(sys, 5, 4);
  auto ones = [](std::initializer_list<Index> idx) {
    std::vector<Vector::Entry> es;
    for (Index i : idx) es.emplace_back(i, 1);
    return Vector::from_entries(std::move(es));
  };
  std::string extra;
  struct Pin {
    Vector x;
    Rational stated;
    std::string label;
  };
  const Pin pins[] = {{ones({1, 2, 3}), 1, "‖e1+e2+e3‖"}, {ones({2, 3, 4, 5}), Rational(5, 4), "‖e2+e3+e4+e5‖"}};
  for (const auto& p : pins) {
    const NormCertificate c = mixed_norm(p.x, sys);
    const Rational o = oracle.evaluate(p.x);
    t.cert(check_mixed(p.x, sys, c), p.label + " witness");
    t.expect(c.value == o, p.label + ": DP " + format(c.value) + ", oracle " + format(o));
    t.expect(c.value == p.stated, p.label + " = " + format(c.value) + " (oracle " + format(o) + "), stated " +
                                      format(p.stated));
  }
  const auto sn = schreier_norm(ones({2, 3, 4}), 1);
  t.cert(check_schreier(ones({2, 3, 4}), 1, sn), "‖e2+e3+e4‖_1 witness");
  t.expect(sn.value == 2 && brute_schreier_norm(ones({2, 3, 4}), 1) == 2,
           "‖e2+e3+e4‖_1 = " + format(sn.value));
  const Vector alt = Vector::from_entries({{1, 1}, {2, -1}, {3, 1}});
  const auto cn = cond_schreier_norm(alt, 1);
  t.cert(check_cond(alt, 1, cn), "‖e1-e2+e3‖_C1 witness");
  t.expect(cn.value == 2 && brute_cond_norm(alt, 1) == 2, "‖e1-e2+e3‖_C1 = " + format(cn.value));
  return finish(5, "Pinned norm values", t, timer, 5, extra);
}

// ---------------------------------------------------------------------------
// 6

Outcome decomposition_property(const Options& o) {
  Timer timer;
  Tally t;
  Rng rng(o.seed ^ 6);
  std::vector<std::pair<ParamSystem, std::size_t>> cases;
  for (const auto& sys : regimes_of(o)) cases.emplace_back(sys, std::min<std::size_t>(2, listed_weights(sys)));
  cases.emplace_back(ParamSystem::relaxed({2, 3, 4}, {1, 2, 3}), 3);
  std::map<PartClass, std::size_t> seen;
  for (const auto& [sys, j] : cases) {
    const std::string rn = regime_name(sys) + " j=" + std::to_string(j);
    const Index mj = sys.m(j);
    const Rational small(1, mj * mj);
    for (int s = 0; s < 120; ++s) {
      // Inner nodes use every listed weight; only the root stays below m_j.
      ApTree tree;
      if (coin(rng, 0.1)) {
        tree = random_tree(rng, sys, pick<Index>(rng, 1, 4), 4, true, j - 1);
      } else {
        const std::size_t root = pick<std::size_t>(rng, 1, j - 1);
        std::vector<ApTree> kids;
        Index next = pick<Index>(rng, 1, 4);
        for (std::size_t k = pick<std::size_t>(rng, 1, 4); k > 0; --k) {
          kids.push_back(random_tree(rng, sys, next, 3));
          next = kids.back().I.max() + 1 + pick<Index>(rng, 0, 1);
        }
        auto admissible = [&] {
          std::vector<FinSet> sets;
          for (const auto& k : kids) sets.push_back(k.I);
          return schreier::is_admissible(SetFamily(std::move(sets)), 1, static_cast<int>(sys.n(root)));
        };
        while (!admissible()) kids.pop_back();
        tree = combine(std::move(kids), root, coin(rng, 0.5) ? 1 : -1, sys);
      }
      const Decomposition d = decompose(tree, j, sys);
      Measure sum;
      Elems mins;
      for (const auto& part : d.parts) {
        sum = sum + mu_of(part.tree).scale(part.lambda);
        mins.push_back(part.tree.I.min());
        ++seen[part.cls];
        bool ok = false;
        switch (part.cls) {
          case PartClass::UnitWeight: ok = part.tree.terminal(); break;
          case PartClass::Heavy: ok = weight(part.tree) >= mj; break;
          case PartClass::SmallCoefficient: ok = abs(part.lambda) <= small; break;
        }
        t.expect(ok, rn + ": part " + std::string(to_string(part.cls)) + " misclassified");
        t.expect(part.tree == subtree(tree, part.path), rn + ": part tree is not the subtree at its node");
      }
      t.cert(sum == mu_of(tree), rn + ": Σλμ differs from μ");
      bool successive = true;
      for (std::size_t k = 1; k < d.parts.size(); ++k)
        successive = successive && precedes(d.parts[k - 1].tree.I, d.parts[k].tree.I);
      t.expect(successive, rn + ": parts not successive");
      t.expect(brute_member(FinSet(mins), static_cast<int>(sys.f(j))),
               rn + ": part minima " + str(FinSet(mins)) + " not in S_" + std::to_string(sys.f(j)));
    }
  }
  std::string extra;
  for (PartClass c : {PartClass::UnitWeight, PartClass::Heavy, PartClass::SmallCoefficient})
    if (!seen[c]) extra += std::string(extra.empty() ? "" : ", ") + "no " + std::string(to_string(c)) + " part generated";
  Outcome out = finish(6, "Decomposition of trees below weight m_j", t, timer, 120);
  if (!extra.empty()) out.detail += " (" + extra + ")";
  return out;
}

// ---------------------------------------------------------------------------
// 7

Outcome antichain_property(const Options& o) {
  Timer timer;
  Tally t;
  std::size_t trees = 0, chains = 0;
  for (const auto& sys : regimes_of(o)) {
    const std::string rn = regime_name(sys);
    EnumerateOptions opts;
    opts.support_bound = 6;
    opts.depth_max = 3;
    opts.positive_only = true;  // signs do not affect supports or weights
    enumerate(opts, sys, [&](const ApTree& tree) {
      ++trees;
      // Antichains of the subtree at a node, as lists of paths; the empty list included.
      std::function<std::vector<std::vector<NodePath>>(const ApTree&, NodePath&)> all = [&](const ApTree& n,
                                                                                          NodePath& path) {
        std::vector<std::vector<NodePath>> acc{{}};
        for (std::size_t c = 0; c < n.children.size(); ++c) {
          path.push_back(c);
          const auto sub = all(n.children[c], path);
          path.pop_back();
          std::vector<std::vector<NodePath>> next;
          for (const auto& a : acc)
            for (const auto& b : sub) {
              auto u = a;
              u.insert(u.end(), b.begin(), b.end());
              next.push_back(std::move(u));
            }
          acc = std::move(next);
        }
        acc.push_back({path});
        return acc;
      };
      NodePath root;
      for (const auto& chain : all(tree, root)) {
        if (chain.empty()) continue;
        ++chains;
        Index p = 0;
        std::vector<std::pair<Index, Index>> sets;  // (min I, n(α))
        for (const auto& path : chain) {
          Index n = 0;
          const ApTree* cur = &tree;
          for (std::size_t step : path) {
            n += sys.n(sys.weight_index(cur->m));
            cur = &cur->children[step];
          }
          p = std::max(p, n);
          sets.emplace_back(cur->I.min(), n);
        }
        std::sort(sets.begin(), sets.end());
        Elems mins;
        for (const auto& s : sets) mins.push_back(s.first);
        const bool brute = brute_member(FinSet(mins), static_cast<int>(p));
        bool lib = false;
        try {
          const auto v = antichain_check(tree, chain, sys);
          lib = v.admissible && v.p == p;
        } catch (const Error&) {
          lib = false;
        }
        t.expect(brute && lib, rn + ": antichain minima " + str(FinSet(mins)) + " not in S_" + std::to_string(p));
      }
      return true;
    });
  }
  Outcome out = finish(7, "Antichains of tree nodes are admissible", t, timer, 120,
                       trees ? std::string{} : "no trees enumerated");
  out.detail += " (" + std::to_string(trees) + " trees, " + std::to_string(chains) + " antichains)";
  return out;
}

// ---------------------------------------------------------------------------
// 8

Outcome average_tree_bound_property(const Options& o) {
  Timer timer;
  Tally t;
  Rng rng(o.seed ^ 8);
  std::size_t instances = 0;
  std::vector<std::string> blocked;
  std::vector<ParamSystem> systems = regimes_of(o);
  systems.push_back(ParamSystem::relaxed({2, 3}, {1, 2}));
  systems.push_back(ParamSystem::relaxed({10, 11}, {1, 2}));
  for (const auto& sys : systems) {
    const std::size_t j = 2;
    if (!sys.has_weight(j)) continue;
    const int xi = static_cast<int>(sys.f(j) + 1);
    const Rational eps(1, 2 * sys.m(j) + 1);
    for (int attempt = 0; attempt < 50 && instances < 50; ++attempt) {
      std::vector<Vector> raw;
      Index at = pick<Index>(rng, 1, 3);
      for (int k = 0; k < 64; ++k) {
        Vector b = random_vector(rng, at, at + 1);
        if (b.empty()) b = Vector::unit(at, 1);
        at = b.max_index() + 1;
        raw.push_back(std::move(b));
      }
      const BlockBasis blocks = BlockBasis::normalize(std::move(raw), sys);
      AverageReport u;
      try {
        u = generic_average(blocks, eps, xi, select_ground(blocks, eps, xi), &sys);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::CapExceeded && e.kind() != ErrorKind::GroundExhausted) throw;
        std::string why = std::string(to_string(e.kind())) + " on " + std::to_string(blocks.size()) + " blocks";
        try {
          repeated_average(xi, GroundSet::progression(blocks.mins().front(), 1), 1);
        } catch (const Error& e2) {
          if (e2.kind() != ErrorKind::CapExceeded) throw;
          why += ", and over " + std::to_string(support_cap()) + " support points even on a unit-step ground";
        }
        blocked.push_back(regime_name(sys) + ": ξ = f_2+1 = " + std::to_string(xi) + " average: " + why);
        break;
      }
      const Index lo = u.vector.min_index();
      std::vector<ApTree> trees;
      Index next = lo;
      while (next <= u.vector.max_index() && trees.size() < 4) {
        trees.push_back(random_tree(rng, sys, next, 3, true, j - 1));
        next = trees.back().I.max() + 1;
      }
      const BoundCheck b = average_tree_bound(blocks, u, j, trees, 1, sys);
      if (!b.applicable) continue;
      ++instances;
      Rational direct = 0;
      for (const auto& tr : trees) direct += pair(mu_of(tr), u.vector);
      t.cert(direct == b.value, regime_name(sys) + ": Σ μ(u) re-evaluation");
      t.expect(b.holds, regime_name(sys) + ": Σ μ(u) = " + format(b.value) + " > 2");
    }
  }
  std::string extra;
  if (instances < 50) {
    extra = std::to_string(instances) + "/50 hypothesis-satisfying instances constructed";
    std::set<std::string> uniq(blocked.begin(), blocked.end());
    for (const auto& s : uniq) extra += "; " + s;
  }
  Outcome out = finish(8, "Trees against an (ε, f_j+1) average sum to at most 2", t, timer, 120, extra);
  if (t.checked == 0) out.detail = extra;
  return out;
}

// ---------------------------------------------------------------------------
// 9

Outcome renorm_property(const Options& o) {
  Timer timer;
  Tally t;
  Rng rng(o.seed ^ 9);
  std::vector<std::string> skipped;
  std::size_t averages = 0;
  for (const auto& sys : regimes_of(o)) {
    const std::string rn = regime_name(sys);
    const std::size_t top = listed_weights(sys);
    for (int s = 0; s < 200; ++s) {
      Vector x = random_vector(rng, 1, 10);
      if (x.empty()) x = Vector::unit(pick<Index>(rng, 1, 10), Rational(1, 2));
      const Rational nx = mixed_norm(x, sys).value;
      for (std::size_t j = 1; j <= top; ++j) {
        const Renorm r = renorm(x, j, sys);
        const Rational dj = sys.delta(j);
        t.expect(r.norm == nx, rn + ": renorm reports ‖x‖ = " + format(r.norm) + " for " + vec_str(x));
        t.expect(dj * nx <= r.value && r.value <= (1 + dj) * nx,
                 rn + ": ‖x‖_" + std::to_string(j) + " = " + format(r.value) + " outside the sandwich for " + vec_str(x));
        t.cert(r.functional.violations(sys).empty() && r.functional.apply(x, sys) == r.sup &&
                   r.value == dj * nx + r.sup,
               rn + ": 𝒜_" + std::to_string(j) + " functional for " + vec_str(x));
      }
    }
    for (std::size_t j = 1; j <= top; ++j) {
      const Rational dj = sys.delta(j);
      const int xi = static_cast<int>(sys.n(j));
      for (int a = 0; a < 10; ++a) {
        std::vector<Vector> raw;
        Index at = pick<Index>(rng, 1, 3);
        for (int k = 0; k < 600; ++k) {
          Vector b = random_vector(rng, at, at + 1);
          if (b.empty()) b = Vector::unit(at, 1);
          at = b.max_index() + 1;
          raw.push_back(std::move(b));
        }
        const BlockBasis blocks = BlockBasis::normalize(std::move(raw), sys);
        AverageReport avg;
        try {
          avg = generic_average(blocks, dj, xi, select_ground(blocks, dj, xi));
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::CapExceeded && e.kind() != ErrorKind::GroundExhausted) throw;
          skipped.push_back(rn + " j=" + std::to_string(j) + ": " + std::string(to_string(e.kind())));
          continue;
        }
        ++averages;
        const AFunctional f = average_functional(blocks, avg, j, sys);
        const Rational v = f.apply(avg.vector, sys);
        t.cert(f.violations(sys).empty(), rn + ": average functional is not in 𝒜_" + std::to_string(j));
        t.expect(v >= dj, rn + ": average functional gives " + format(v) + " < δ_" + std::to_string(j));
      }
    }
  }
  Outcome out = finish(9, "Renorm sandwich and 𝒜_j functionals on averages", t, timer, 120);
  out.detail += " (" + std::to_string(averages) + " averages";
  std::map<std::string, int> uniq;
  for (const auto& s : skipped) ++uniq[s];
  for (const auto& [s, k] : uniq) out.detail += "; " + std::to_string(k) + "/10 not constructible: " + s;
  out.detail += ")";
  return out;
}

// ---------------------------------------------------------------------------
// 11

Outcome alternating_property(const Options& o) {
  Timer timer;
  Tally t;
  Rng rng(o.seed ^ 11);
  for (int s = 0; s < 240; ++s) {
    const int xi = s % 3;
    const std::size_t len = pick<std::size_t>(rng, 1, 10);
    std::vector<Rational> a(len);
    for (auto& v : a) {
      v = Rational(pick<int>(rng, 0, 12), pick<int>(rng, 1, 4));
      v.canonicalize();
    }
    std::sort(a.begin(), a.end(), std::greater<>());
    std::set<Index> ts;
    while (ts.size() < len) ts.insert(pick<Index>(rng, 1, 30));
    std::vector<Vector::Entry> plain, alt;
    std::size_t i = 0;
    for (Index ti : ts) {
      ++i;
      if (a[i - 1] == 0) continue;
      plain.emplace_back(ti, a[i - 1]);
      alt.emplace_back(ti, i % 2 ? Rational(-a[i - 1]) : a[i - 1]);
    }
    const Vector x = Vector::from_entries(plain), y = Vector::from_entries(alt);
    const NormCertificate sx = schreier_norm(x, xi), cy = cond_schreier_norm(y, xi);
    t.cert(check_schreier(x, xi, sx), "Schreier witness for " + vec_str(x));
    t.cert(check_cond(y, xi, cy), "conditional witness for " + vec_str(y));
    if (x.size() <= 10) {
      t.expect(sx.value == brute_schreier_norm(x, xi), "Schreier norm differs from exhaustive at " + vec_str(x));
      t.expect(cy.value == brute_cond_norm(y, xi), "conditional norm differs from exhaustive at " + vec_str(y));
    }
    t.expect(cy.value <= sx.value, "‖alternating‖_C" + std::to_string(xi) + " = " + format(cy.value) + " > " +
                                       format(sx.value) + " at " + vec_str(x));
  }
  return finish(11, "Alternating sums: conditional norm below Schreier norm", t, timer, 60);
}

// ---------------------------------------------------------------------------
// 12

namespace {

struct Chain {
  Index p;
  std::vector<ApTree> trees;
};

// T_1 has weight m_{2j_1} (2j_1 > p); every later root weight is σ of the prefix.
Chain build_chain(Rng& rng, Index p, Index start, std::size_t len, SigmaRegistry& reg, const ParamSystem& sys,
                  bool pin_start = false) {
  Chain c{p, {}};
  Index at = start;
  std::size_t index = static_cast<std::size_t>(p + 1 + (p + 1) % 2);
  for (std::size_t k = 0; k < len; ++k) {
    if (k > 0) index = sigma_assign(c.trees, reg, sys).index;
    ApTree inner = pin_start && k == 0 ? ApTree::leaf(at) : random_tree(rng, sys, at, 2, true, 4);
    c.trees.push_back(combine({std::move(inner)}, index, coin(rng, 0.5) ? 1 : -1, sys));
    at = c.trees.back().I.max() + 1 + pick<Index>(rng, 0, 2);
  }
  return c;
}

bool has_reason(const Verdict& v, const std::string& r) {
  return std::find(v.reasons.begin(), v.reasons.end(), r) != v.reasons.end();
}

std::string reasons(const Verdict& v) {
  std::string s;
  for (const auto& r : v.reasons) s += (s.empty() ? "" : "; ") + r;
  return s.empty() ? "none" : s;
}

}  // namespace

Outcome coding_property(const Options& o) {
  Timer timer;
  Tally t;
  Rng rng(o.seed ^ 12);
  const ParamSystem sys(GroundSet::progression(2, 1), GroundSet{}, GroundSet::progression(1, 1), Mode::Relaxed);

  SigmaRegistry reg;
  std::set<std::string> payloads;
  std::map<std::size_t, std::string> by_index;
  while (payloads.size() < 10000) {
    std::vector<ApTree> seq;
    Index at = pick<Index>(rng, 1, 6);
    for (std::size_t k = pick<std::size_t>(rng, 1, 3); k > 0; --k) {
      seq.push_back(random_tree(rng, sys, at, 3, true, 6));
      at = seq.back().I.max() + 1 + pick<Index>(rng, 0, 2);
    }
    const std::string payload = serialize(seq);
    if (!payloads.insert(payload).second) continue;
    const SigmaValue v = sigma_assign(seq, reg, sys);
    Index floor = 0;
    for (const auto& tr : seq) floor = std::max(floor, weight(tr));
    t.expect(v.index % 2 == 0 && v.value == sys.m(v.index) && v.value > floor,
             "σ = m_" + std::to_string(v.index) + " does not exceed the member weights");
    const auto [it, fresh] = by_index.emplace(v.index, payload);
    t.expect(fresh, "σ repeats index " + std::to_string(v.index));
    t.expect(sigma_assign(seq, reg, sys).index == v.index, "σ is not stable on repeat");
  }

  std::size_t chains = 0;
  for (int c = 0; c < 120; ++c) {
    const Index p = pick<Index>(rng, 1, 3);
    const std::size_t len = pick<std::size_t>(rng, 2, 4);
    const Chain ch = build_chain(rng, p, pick<Index>(rng, 4, 8), len, reg, sys);
    ++chains;
    const Verdict ok = is_dependent(ch.trees, p, reg, sys);
    t.expect(ok.ok, "built chain rejected: " + reasons(ok));

    // Last root weight moved off σ.
    auto bad = ch.trees;
    bad.back() = combine(bad.back().children, sys.weight_index(bad.back().m) + 2, bad.back().sign, sys);
    Verdict v = is_dependent(bad, p, reg, sys);
    const std::string mismatch = "σ mismatch at i=" + std::to_string(len);
    t.expect(!v.ok && v.reasons == std::vector<std::string>{mismatch}, "weight perturbation: " + reasons(v));

    // First root weight odd-indexed.
    bad = ch.trees;
    bad.front() = combine(bad.front().children, sys.weight_index(bad.front().m) - 1, bad.front().sign, sys);
    v = is_dependent(bad, p, reg, sys);
    t.expect(!v.ok && has_reason(v, "w(T_1) is not m_{2j} with j > p/2"), "first-weight perturbation: " + reasons(v));

    // Two trees swapped.
    bad = ch.trees;
    std::swap(bad[0], bad[1]);
    v = is_dependent(bad, p, reg, sys);
    t.expect(!v.ok && v.reasons == std::vector<std::string>{"not successive"}, "order perturbation: " + reasons(v));

    // Same construction started at 1, so the root minima leave S_p.
    const Chain low = build_chain(rng, p, 1, len, reg, sys, true);
    v = is_dependent(low.trees, p, reg, sys);
    t.expect(!v.ok && v.reasons == std::vector<std::string>{"not S_" + std::to_string(p) + "-admissible"},
             "support perturbation: " + reasons(v));

    if (p == 3) {
      const Measure f = dependent_functional(ch.trees, 1, p, reg, sys);
      Measure direct;
      for (const auto& tr : ch.trees) direct = direct + mu_of(tr);
      t.cert(f == direct.scale(Rational(1, sys.m(3))), "dependent functional re-evaluation");
      t.expect(f.linf() <= 1, "dependent functional exceeds 1 in absolute value");
    }
  }
  Outcome out = finish(12, "σ coding is injective; dependent chains validate and perturbations fail", t, timer, 120);
  out.detail += " (" + std::to_string(payloads.size()) + " sequences, " + std::to_string(chains) + " chains)";
  return out;
}

// ---------------------------------------------------------------------------
// 13

Outcome certificate_property() {
  Timer timer;
  const auto& l = certificates();
  Outcome o;
  o.id = 13;
  o.name = "Every certificate re-evaluates to its claimed value";
  o.pass = l.checked > 0 && l.failed == 0;
  o.detail = std::to_string(l.checked - l.failed) + "/" + std::to_string(l.checked.load()) + " certificates";
  o.seconds = timer.seconds();
  return o;
}

std::vector<Outcome> run_suite(const std::string& suite, const Options& o) {
  std::vector<Outcome> out;
  const bool all = suite == "all";
  if (!all && suite != "schreier" && suite != "measures" && suite != "norms" && suite != "trees" &&
      suite != "distortion" && suite != "coding")
    fail(ErrorKind::Input, "unknown suite '" + suite + "'");
  if (all || suite == "schreier") {
    out.push_back(schreier_oracle(o));
    out.push_back(schreier_invariants(o));
  }
  if (all || suite == "measures") out.push_back(repeated_average_properties(o));
  if (all || suite == "norms") {
    auto [a, b] = mixed_norm_oracle(o);
    out.push_back(a);
    out.push_back(pinned_values(o));
    out.push_back(b);
    out.push_back(alternating_property(o));
  }
  if (all || suite == "trees") {
    out.push_back(decomposition_property(o));
    out.push_back(antichain_property(o));
  }
  if (all || suite == "distortion") {
    out.push_back(average_tree_bound_property(o));
    out.push_back(renorm_property(o));
  }
  if (all || suite == "coding") out.push_back(coding_property(o));
  if (all) out.push_back(certificate_property());
  std::sort(out.begin(), out.end(), [](const Outcome& a, const Outcome& b) { return a.id < b.id; });
  return out;
}

}  // namespace tsf::verify
