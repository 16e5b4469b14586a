#include "tsf/params.hpp"

#include <limits>

namespace tsf {

std::string_view to_string(Mode mode) { return mode == Mode::Strict ? "strict" : "relaxed"; }

namespace {

std::string str(Index v) { return std::to_string(v); }

mpz_class pow(Index base, unsigned long e) {
  mpz_class out;
  mpz_pow_ui(out.get_mpz_t(), mpz_class(static_cast<long>(base)).get_mpz_t(), e);
  return out;
}

}  // namespace

SystemReport validate_system(const GroundSet& m, const GroundSet& l) {
  SystemReport rep;
  // Tail rules are checked on their first 16 elements.
  auto head = [](const GroundSet& g) { return g.take(g.prefix().size() + (g.infinite() ? 16 : 0)); };
  const std::vector<Index> mp = head(m);
  const std::vector<Index> lp = head(l);
  bool strict = true;
  bool relaxed = true;
  auto add = [&](std::string name, bool pass, std::string detail, bool strict_only) {
    if (!pass) {
      strict = false;
      if (!strict_only) relaxed = false;
    }
    rep.checks.push_back({std::move(name), pass, std::move(detail)});
  };

  if (mp.empty()) {
    add("M nonempty", false, "no listed weights", false);
  } else {
    add("m_1 >= 2", mp[0] >= 2, "m_1 = " + str(mp[0]), false);
    add("m_1 > 6", mp[0] > 6, "m_1 = " + str(mp[0]), true);
    for (std::size_t i = 0; i + 1 < mp.size(); ++i) {
      const mpz_class sq = pow(mp[i], 2);
      add("m_" + str(i + 1) + "^2 < m_" + str(i + 2), sq < mp[i + 1],
          sq.get_str() + (sq < mp[i + 1] ? " < " : " >= ") + str(mp[i + 1]), true);
    }
  }
  if (lp.empty()) {
    add("L nonempty", false, "no listed exponents", true);
  } else {
    add("l_1 > 4", lp[0] > 4, "l_1 = " + str(lp[0]), true);
    for (std::size_t i = 0; i < lp.size() && i < mp.size(); ++i) {
      const bool ok = lp[i] >= 0 && pow(2, static_cast<unsigned long>(lp[i])) > mp[i];
      add("2^l_" + str(i + 1) + " > m_" + str(i + 1), ok, "l = " + str(lp[i]) + ", m = " + str(mp[i]), true);
    }
    if (!l.infinite() && (lp.size() < mp.size() || m.infinite()))
      add("L covers M", false, str(lp.size()) + " exponents for " + str(mp.size()) + " weights", true);
  }
  rep.strict_valid = strict;
  rep.relaxed_valid = relaxed;
  return rep;
}

Index f_value(const GroundSet& m, const GroundSet& n, std::size_t j) {
  if (j < 1) fail(ErrorKind::Input, "j must be positive");
  if (j == 1) return 1;
  const mpz_class bound = pow(m.at(j - 1), 3);
  std::vector<Index> ms, ns;
  for (std::size_t i = 0; i + 1 < j; ++i) {
    ms.push_back(m.at(i));
    ns.push_back(n.at(i));
  }
  // Depth-first over ρ_1, ρ_2, ... with the exact product kept below m_j³.
  Index best = 0;
  auto dfs = [&](auto&& self, std::size_t i, const mpz_class& prod, Index sum) -> void {
    if (i == ms.size()) {
      best = std::max(best, sum);
      return;
    }
    mpz_class p = prod;
    Index s = sum;
    std::vector<std::pair<mpz_class, Index>> options{{p, s}};
    while (true) {
      p *= ms[i];
      if (p >= bound) break;
      s += ns[i];
      options.emplace_back(p, s);
    }
    for (auto it = options.rbegin(); it != options.rend(); ++it) self(self, i + 1, it->first, it->second);
  };
  if (mpz_class(1) < bound) dfs(dfs, 0, mpz_class(1), 0);
  return best;
}

ParamSystem::ParamSystem(GroundSet m, GroundSet l, GroundSet n, Mode mode)
    : m_(std::move(m)), l_(std::move(l)), n_(std::move(n)), mode_(mode) {
  const SystemReport rep = validate_system(m_, l_);
  for (const auto& c : rep.checks)
    if (!c.pass) violations_.push_back(c.name + " (" + c.detail + ")");
  if (mode_ == Mode::Strict && !rep.strict_valid) {
    std::string msg = "strict mode constraints violated:";
    for (const auto& v : violations_) msg += " " + v + ";";
    fail(ErrorKind::InvalidSystem, msg);
  }
  if (!rep.relaxed_valid) {
    std::string msg = "constraints violated:";
    for (const auto& v : violations_) msg += " " + v + ";";
    fail(ErrorKind::InvalidSystem, msg);
  }
  if (n_.prefix().empty() && !n_.infinite()) fail(ErrorKind::InvalidSystem, "N must be nonempty");
  if (m_.prefix().empty() && !m_.infinite()) fail(ErrorKind::InvalidSystem, "M must be nonempty");
}

ParamSystem ParamSystem::relaxed(std::vector<Index> m, std::vector<Index> n) {
  return ParamSystem(GroundSet(std::move(m)), GroundSet(), GroundSet(std::move(n)), Mode::Relaxed);
}

std::size_t ParamSystem::weight_count() const {
  constexpr auto inf = std::numeric_limits<std::size_t>::max();
  const std::size_t a = m_.infinite() ? inf : m_.prefix().size();
  const std::size_t b = n_.infinite() ? inf : n_.prefix().size();
  return std::min(a, b);
}

std::size_t ParamSystem::weight_index(Index value) const {
  for (std::size_t j = 1; has_weight(j); ++j) {
    const Index v = m(j);
    if (v == value) return j;
    if (v > value) break;
  }
  return 0;
}

Index ParamSystem::f(std::size_t j) const {
  {
    std::lock_guard lock(cache_->mu);
    auto it = cache_->f.find(j);
    if (it != cache_->f.end()) return it->second;
  }
  const Index v = f_value(m_, n_, j);
  std::lock_guard lock(cache_->mu);
  return cache_->f.emplace(j, v).first->second;
}

GoodReport is_good(const ParamSystem& sys, std::size_t j_max) {
  if (j_max < 1) fail(ErrorKind::Input, "j_max must be positive");
  GoodReport rep;
  for (std::size_t j = 1; j <= j_max; ++j) {
    GoodRow row{j, sys.f(j), sys.l(j), sys.n(j), false};
    row.pass = mpz_class(static_cast<long>(row.l)) * (row.f + 1) < row.n;
    rep.pass = rep.pass && row.pass;
    rep.rows.push_back(row);
  }
  return rep;
}

GroundSet make_good(const GroundSet& m, const GroundSet& l, const GroundSet& p, std::size_t length) {
  if (length < 1) fail(ErrorKind::Input, "length must be positive");
  if (!validate_system(m, l).strict_valid) fail(ErrorKind::InvalidSystem, "make_good needs strict-valid (M, L)");
  std::vector<Index> n;
  std::size_t cursor = 0;  // elements of P before cursor are used or too small
  for (std::size_t j = 1; j <= length; ++j) {
    const Index f = f_value(m, GroundSet(n), j);
    const Index threshold = l.at(j - 1) * (f + 1);
    // N must be a subsequence of P, so candidates also have to exceed n_{j-1}.
    while (true) {
      if (!p.has(cursor))
        fail(ErrorKind::GroundExhausted, "no element of P exceeds " + std::to_string(threshold) + " for j = " +
                                             std::to_string(j));
      const Index c = p.at(cursor++);
      if (c > threshold) {
        n.push_back(c);
        break;
      }
    }
  }
  return GroundSet(std::move(n));
}

}  // namespace tsf
