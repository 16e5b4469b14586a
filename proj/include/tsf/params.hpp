#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "tsf/core.hpp"
#include "tsf/measures.hpp"

namespace tsf {

enum class Mode { Strict, Relaxed };

std::string_view to_string(Mode mode);

struct Check {
  std::string name;
  bool pass;
  std::string detail;
};

struct SystemReport {
  std::vector<Check> checks;
  bool strict_valid = false;
  bool relaxed_valid = false;
};

/// Constraint report for weights M and exponents L:
///   strict:  m_1 > 6, m_i² < m_{i+1}, l_1 > 4, 2^{l_i} > m_i
///   relaxed: m_1 ≥ 2 (M is strictly increasing by construction)
/// Listed prefix elements are checked, plus the first 16 elements of a tail rule.
SystemReport validate_system(const GroundSet& m, const GroundSet& l);

/// f_1 = 1; for j ≥ 2, max Σ_{i<j} ρ_i n_i over ρ ∈ ℕ_0^{j-1} with ∏ m_i^{ρ_i} < m_j³.
Index f_value(const GroundSet& m, const GroundSet& n, std::size_t j);

/// Weights, exponents and Schreier indices. Indices are 1-based throughout.
class ParamSystem {
 public:
  ParamSystem(GroundSet m, GroundSet l, GroundSet n, Mode mode);
  /// Toy regime with no exponent data.
  static ParamSystem relaxed(std::vector<Index> m, std::vector<Index> n);

  const GroundSet& M() const noexcept { return m_; }
  const GroundSet& L() const noexcept { return l_; }
  const GroundSet& N() const noexcept { return n_; }
  Mode mode() const noexcept { return mode_; }
  /// Violations recorded in relaxed mode (strict mode throws instead).
  const std::vector<std::string>& violations() const noexcept { return violations_; }

  Index m(std::size_t j) const { return m_.at(j - 1); }
  Index n(std::size_t j) const { return n_.at(j - 1); }
  Index l(std::size_t j) const { return l_.at(j - 1); }
  Rational delta(std::size_t j) const { return Rational(1, m(j)); }
  bool has_weight(std::size_t j) const { return j >= 1 && m_.has(j - 1) && n_.has(j - 1); }
  /// Number of (m_j, n_j) pairs available, or SIZE_MAX when both are infinite.
  std::size_t weight_count() const;
  /// Index j with m_j = value, or 0.
  std::size_t weight_index(Index value) const;

  /// f_j, memoised (write-once).
  Index f(std::size_t j) const;

 private:
  GroundSet m_, l_, n_;
  Mode mode_;
  std::vector<std::string> violations_;
  struct Cache {
    std::mutex mu;
    std::map<std::size_t, Index> f;
  };
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

struct GoodRow {
  std::size_t j;
  Index f;
  Index l;
  Index n;
  bool pass;  // l_j (f_j + 1) < n_j
};

struct GoodReport {
  std::vector<GoodRow> rows;
  bool pass = true;
};

GoodReport is_good(const ParamSystem& sys, std::size_t j_max);

/// Greedy M-good N ⊆ P: n_j = least p ∈ P with p > l_j (f_j + 1) and p > n_{j-1}.
GroundSet make_good(const GroundSet& m, const GroundSet& l, const GroundSet& p, std::size_t length);

}  // namespace tsf
