#include "tsf/norms.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <memory>
#include <set>
#include <string>

#include "tsf/schreier.hpp"

namespace tsf {

NormCertificate schreier_norm(const Vector& x, int xi) {
  std::vector<schreier::WeightedPoint> pts;
  for (const auto& [i, v] : x.entries()) pts.push_back({i, abs(v)});
  auto best = schreier::max_weight_member(pts, xi);
  NormCertificate c{best.value, std::monostate{}};
  if (!x.empty()) c.witness = best.witness;
  return c;
}

NormCertificate cond_schreier_norm(const Vector& x, int xi) {
  schreier::checked_order(xi);
  if (x.empty()) return {Rational(0), std::monostate{}};
  const auto& e = x.entries();
  const std::size_t n = e.size();
  std::vector<Index> labels;
  std::vector<Rational> prefix(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    labels.push_back(e[i].first);
    prefix[i + 1] = prefix[i] + e[i].second;
  }
  // An interval block starting at support position a may end anywhere before b.
  std::vector<std::size_t> end_of(n * (n + 1));
  auto edge = [&](std::size_t a, std::size_t b) {
    Rational best = -1;
    std::size_t arg = a;
    for (std::size_t t = a; t < b; ++t) {
      Rational s = abs(Rational(prefix[t + 1] - prefix[a]));
      if (s > best) {
        best = s;
        arg = t;
      }
    }
    end_of[a * (n + 1) + b] = arg;
    return best;
  };
  auto chain = schreier::max_admissible_chain(labels, 0, n - 1, xi, edge, false);
  std::vector<SignedInterval> blocks;
  for (std::size_t k = 0; k < chain.starts.size(); ++k) {
    const std::size_t a = chain.starts[k];
    const std::size_t b = k + 1 < chain.starts.size() ? chain.starts[k + 1] : n;
    const std::size_t t = end_of[a * (n + 1) + b];
    const Rational s = prefix[t + 1] - prefix[a];
    if (s == 0) continue;
    blocks.push_back({labels[a], labels[t], s > 0 ? 1 : -1});
  }
  return {chain.value, blocks};
}

// ---------------------------------------------------------------------------

namespace {

struct PathNode {
  std::size_t pos;
  std::shared_ptr<const PathNode> prev;
};
using Path = std::shared_ptr<const PathNode>;

struct Entry {
  schreier::Automaton state;
  Rational value;
  Path path;
};

void prune(std::vector<Entry>& entries) {
  if (entries.size() < 2) return;
  std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.value > b.value; });
  std::vector<Entry> kept;
  for (auto& e : entries) {
    bool dominated = false;
    for (const auto& k : kept)
      if (k.state.dominates(e.state)) {
        dominated = true;
        break;
      }
    if (!dominated) kept.push_back(std::move(e));
  }
  entries = std::move(kept);
}

std::vector<std::size_t> unwind(const Path& p) {
  std::vector<std::size_t> out;
  for (const PathNode* n = p.get(); n != nullptr; n = n->prev.get()) out.push_back(n->pos);
  std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace

MixedNorm::MixedNorm(const Vector& x, const ParamSystem& sys) : x_(x), sys_(sys) {
  for (const auto& [i, v] : x_.entries()) {
    labels_.push_back(i);
    abs_.push_back(abs(v));
    sign_.push_back(v > 0 ? 1 : -1);
  }
  n_ = labels_.size();
  value_.assign(n_ * n_, Rational(0));
  choice_.assign(n_ * n_, Choice{});
  if (n_ > 0) solve();
}

void MixedNorm::solve() {
  const std::size_t n = n_;
  // Largest ℓ1/ℓ∞ ratio bounds the useful weights.
  Rational ratio = 0;
  for (std::size_t lo = 0; lo < n; ++lo) {
    Rational l1 = 0, linf = 0;
    for (std::size_t hi = lo; hi < n; ++hi) {
      l1 += abs_[hi];
      linf = std::max(linf, abs_[hi]);
      ratio = std::max(ratio, Rational(l1 / linf));
    }
  }
  const std::size_t listed = sys_.weight_count();
  struct Weight {
    Rational m;
    int order;
  };
  std::vector<Weight> weights;
  for (std::size_t j = 1; j <= listed && sys_.m(j) < ratio; ++j) {
    const Index nj = sys_.n(j);
    if (nj > std::numeric_limits<int>::max()) fail(ErrorKind::Input, "n_j too large");
    weights.push_back({Rational(sys_.m(j)), static_cast<int>(nj)});
  }
  const bool bounded = listed != std::numeric_limits<std::size_t>::max();
  const Rational next_unknown = bounded ? Rational(sys_.m(listed) + 1) : Rational(0);

  const std::size_t J = weights.size();
  // entries[w][a - lo]: chain states whose current block starts at position a.
  std::vector<std::vector<std::vector<Entry>>> entries(J);
  for (std::size_t lo = n; lo-- > 0;) {
    for (std::size_t w = 0; w < J; ++w) {
      entries[w].assign(n - lo, {});
      schreier::Automaton st(weights[w].order);
      st.push(labels_[lo]);
      entries[w][0].push_back(Entry{std::move(st), Rational(0), std::make_shared<const PathNode>(PathNode{lo, nullptr})});
    }
    Rational l1 = 0, linf = 0;
    std::size_t arg = lo;
    for (std::size_t hi = lo; hi < n; ++hi) {
      l1 += abs_[hi];
      if (abs_[hi] > linf) {
        linf = abs_[hi];
        arg = hi;
      }
      Rational best = linf;
      Choice choice{0, arg, {}};
      // Chains whose first block starts after lo.
      if (hi > lo && value(lo + 1, hi) > best) {
        best = value(lo + 1, hi);
        choice = choice_[(lo + 1) * n + hi];
      }
      for (std::size_t w = 0; w < J; ++w) {
        if (hi > lo) prune(entries[w][hi - lo]);
        if (weights[w].m * linf >= l1) continue;
        const Entry* top = nullptr;
        Rational top_sum;
        // a = lo would be the whole interval as a single block.
        for (std::size_t a = lo + 1; a <= hi; ++a)
          for (const auto& e : entries[w][a - lo]) {
            Rational s = e.value + value(a, hi);
            if (top == nullptr || s > top_sum) {
              top = &e;
              top_sum = std::move(s);
            }
          }
        if (top == nullptr) continue;
        Rational cand = top_sum / weights[w].m;
        if (cand > best) {
          best = std::move(cand);
          choice = Choice{w + 1, 0, unwind(top->path)};
        }
      }
      if (bounded && l1 > next_unknown * best)
        fail(ErrorKind::GroundExhausted,
             "weights beyond the listed m_" + std::to_string(listed) + " = " + std::to_string(sys_.m(listed)) +
                 " could raise the norm of x restricted to [" + std::to_string(labels_[lo]) + ", " +
                 std::to_string(labels_[hi]) + "]; extend M and N or give them tail rules");
      value_[lo * n + hi] = std::move(best);
      choice_[lo * n + hi] = std::move(choice);
      if (hi + 1 == n) break;
      for (std::size_t w = 0; w < J; ++w) {
        auto& target = entries[w][hi + 1 - lo];
        for (std::size_t a = lo; a <= hi; ++a)
          for (const auto& e : entries[w][a - lo]) {
            schreier::Automaton next = e.state;
            if (!next.push(labels_[hi + 1])) continue;
            target.push_back(Entry{std::move(next), e.value + value(a, hi),
                                   std::make_shared<const PathNode>(PathNode{hi + 1, e.path})});
          }
      }
    }
  }
}

Rational MixedNorm::norm() const { return n_ == 0 ? Rational(0) : value(0, n_ - 1); }

ApTree MixedNorm::witness(std::size_t lo, std::size_t hi) const {
  if (lo > hi || hi >= n_) fail(ErrorKind::Precondition, "witness requested for an empty range");
  const Choice& c = choice_[lo * n_ + hi];
  if (c.j == 0) return ApTree::leaf(labels_[c.term], sign_[c.term]);
  ApTree node{sys_.m(c.j), {}, 1, {}};
  std::vector<Index> u;
  for (std::size_t k = 0; k < c.starts.size(); ++k) {
    const std::size_t a = c.starts[k];
    const std::size_t b = k + 1 < c.starts.size() ? c.starts[k + 1] - 1 : hi;
    ApTree child = witness(a, b);
    u.insert(u.end(), child.I.begin(), child.I.end());
    node.children.push_back(std::move(child));
  }
  node.I = FinSet(std::move(u));
  return node;
}

NormCertificate MixedNorm::certificate() const {
  if (n_ == 0) return {Rational(0), std::monostate{}};
  return {norm(), witness()};
}

NormCertificate mixed_norm(const Vector& x, const ParamSystem& sys) { return MixedNorm(x, sys).certificate(); }

AdmissibleSum admissible_block_sum(const MixedNorm& dp, int xi) {
  AdmissibleSum out;
  const std::size_t n = dp.positions();
  if (n == 0) return out;
  auto chain = schreier::max_admissible_chain(
      dp.labels(), 0, n - 1, xi, [&](std::size_t a, std::size_t b) { return dp.value(a, b - 1); }, false);
  out.value = chain.value;
  for (std::size_t k = 0; k < chain.starts.size(); ++k) {
    const std::size_t a = chain.starts[k];
    const std::size_t b = k + 1 < chain.starts.size() ? chain.starts[k + 1] - 1 : n - 1;
    out.blocks.emplace_back(a, b);
  }
  return out;
}

// ---------------------------------------------------------------------------

OracleNorm::OracleNorm(const ParamSystem& sys, Index support_bound, std::size_t depth_max)
    : bound_(support_bound), depth_(depth_max) {
  if (support_bound < 1 || support_bound > kSupportCap)
    fail(ErrorKind::CapExceeded, "oracle support bound must lie in [1, " + std::to_string(kSupportCap) + "]");
  if (depth_max > kDepthCap) fail(ErrorKind::CapExceeded, "oracle depth must be at most " + std::to_string(kDepthCap));
  // Every profile entry is 1/m(α), a product of at most depth-1 listed weights.
  mpz_class l = 1;
  for (std::size_t j = 1; j <= sys.M().prefix().size() && sys.has_weight(j); ++j)
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), mpz_class(static_cast<long>(sys.m(j))).get_mpz_t());
  denom_ = 1;
  for (std::size_t d = 1; d < std::max<std::size_t>(depth_max, 1); ++d) denom_ *= l;
  if (denom_ > mpz_class(std::numeric_limits<std::int32_t>::max()))
    fail(ErrorKind::CapExceeded, "oracle common denominator too large");
  const std::int64_t den = denom_.get_si();
  std::set<std::vector<std::int64_t>> seen;
  EnumerateOptions opts{support_bound, depth_max, true};
  trees_ = enumerate(opts, sys, [&](const ApTree& t) {
    std::vector<std::int64_t> prof(static_cast<std::size_t>(bound_), 0);
    const Measure mu = mu_of(t);
    for (const auto& [i, q] : mu.entries()) {
      const mpz_class num = q.get_num() * (mpz_class(den) / q.get_den());
      prof[static_cast<std::size_t>(i - 1)] = num.get_si();
    }
    seen.insert(std::move(prof));
    return true;
  });
  profiles_.assign(seen.begin(), seen.end());
}

Rational OracleNorm::evaluate(const Vector& x) const {
  if (x.empty()) return 0;
  if (x.max_index() > bound_) fail(ErrorKind::CapExceeded, "vector support exceeds the oracle bound");
  mpz_class xden = 1;
  for (const auto& [i, q] : x.entries()) mpz_lcm(xden.get_mpz_t(), xden.get_mpz_t(), q.get_den().get_mpz_t());
  std::vector<mpz_class> xs(static_cast<std::size_t>(bound_), 0);
  bool small = true;
  std::vector<std::int64_t> xi(static_cast<std::size_t>(bound_), 0);
  for (const auto& [i, q] : x.entries()) {
    mpz_class v = abs(Rational(q)).get_num() * (xden / q.get_den());
    small = small && v.fits_slong_p() && v < mpz_class(1L << 40);
    if (small) xi[static_cast<std::size_t>(i - 1)] = v.get_si();
    xs[static_cast<std::size_t>(i - 1)] = std::move(v);
  }
  mpz_class best = 0;
  if (small) {
    __int128 top = 0;
    for (const auto& p : profiles_) {
      __int128 s = 0;
      for (std::size_t k = 0; k < p.size(); ++k) s += static_cast<__int128>(p[k]) * xi[k];
      top = std::max(top, s);
    }
    best = mpz_class(static_cast<long>(top));
  } else {
    for (const auto& p : profiles_) {
      mpz_class s = 0;
      for (std::size_t k = 0; k < p.size(); ++k) s += mpz_class(static_cast<long>(p[k])) * xs[k];
      if (s > best) best = s;
    }
  }
  Rational out(best, denom_ * xden);
  out.canonicalize();
  return out;
}

Rational oracle_norm(const Vector& x, const ParamSystem& sys, std::size_t depth_max) {
  if (x.empty()) return 0;
  return OracleNorm(sys, x.max_index(), depth_max).evaluate(x);
}

FunctionalChoice functional_set_norm(const Vector& x, const std::vector<ApTree>& funcs) {
  if (funcs.empty()) fail(ErrorKind::Input, "functional family must be nonempty");
  FunctionalChoice best{pair(mu_of(funcs[0]), x), 0};
  for (std::size_t i = 1; i < funcs.size(); ++i) {
    Rational v = pair(mu_of(funcs[i]), x);
    if (v > best.value) best = {std::move(v), i};
  }
  return best;
}

// ---------------------------------------------------------------------------

bool check_schreier(const Vector& x, int xi, const NormCertificate& c) {
  if (x.empty()) return c.value == 0;
  const auto* f = std::get_if<FinSet>(&c.witness);
  if (f == nullptr || !schreier::is_member(*f, xi)) return false;
  Rational s = 0;
  for (Index i : *f) s += abs(x.at(i));
  return s == c.value;
}

bool check_cond(const Vector& x, int xi, const NormCertificate& c) {
  if (x.empty()) return c.value == 0;
  const auto* fam = std::get_if<std::vector<SignedInterval>>(&c.witness);
  if (fam == nullptr) return false;
  if (fam->empty()) return c.value == 0;
  std::vector<FinSet> sets;
  Rational total = 0;
  for (const auto& j : *fam) {
    if (j.lo > j.hi || (j.sign != 1 && j.sign != -1)) return false;
    Rational s = x.restrict(j.lo, j.hi).total() * j.sign;
    if (s < 0) return false;
    total += s;
    sets.push_back(FinSet::interval(j.lo, j.hi));
  }
  for (std::size_t i = 1; i < sets.size(); ++i)
    if (!precedes(sets[i - 1], sets[i])) return false;
  return total == c.value && schreier::is_admissible(SetFamily(std::move(sets)), 1, xi);
}

bool check_mixed(const Vector& x, const ParamSystem& sys, const NormCertificate& c) {
  if (x.empty()) return c.value == 0;
  const auto* t = std::get_if<ApTree>(&c.witness);
  if (t == nullptr || !tree_violations(*t, sys).empty()) return false;
  return pair(mu_of(*t), x) == c.value;
}

}  // namespace tsf
