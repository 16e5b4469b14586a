#pragma once

#include <gtest/gtest.h>

#include <utility>
#include <vector>

#include "tsf/core.hpp"
#include "tsf/measures.hpp"
#include "tsf/params.hpp"
#include "tsf/trees.hpp"

namespace tsf {
inline void PrintTo(ErrorKind k, std::ostream* os) { *os << to_string(k); }
}  // namespace tsf

namespace tsf::test {

inline Rational q(long p, long d = 1) {
  Rational r(p, d);
  r.canonicalize();
  return r;
}

inline Vector vec(std::vector<std::pair<Index, Rational>> entries) { return Vector::from_entries(std::move(entries)); }
inline Measure meas(std::vector<std::pair<Index, Rational>> entries) { return Measure::from_entries(std::move(entries)); }

/// Sum of unit vectors e_i.
inline Vector ones(std::initializer_list<Index> support) {
  std::vector<std::pair<Index, Rational>> e;
  for (Index i : support) e.emplace_back(i, Rational(1));
  return vec(std::move(e));
}

/// M = (2,4), N = (1,2), relaxed.
inline ParamSystem toy() { return ParamSystem::relaxed({2, 4}, {1, 2}); }
/// M = (2,5), N = (1,3), relaxed.
inline ParamSystem toy2() { return ParamSystem::relaxed({2, 5}, {1, 3}); }

/// Root of weight m over terminals at the given points.
inline ApTree flat(Index m, std::initializer_list<Index> points, std::initializer_list<int> signs = {}) {
  ApTree t{m, FinSet(std::vector<Index>(points)), 1, {}};
  auto s = signs.begin();
  for (Index p : points) t.children.push_back(ApTree::leaf(p, s != signs.end() ? *s++ : 1));
  return t;
}

template <class F>
ErrorKind error_kind(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no tsf::Error thrown";
  return ErrorKind::Internal;
}

}  // namespace tsf::test
