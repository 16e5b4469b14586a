#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tsf {

/// Positions in ℕ (1-based basis indices, set elements, weights).
using Index = std::int64_t;

/// Exact rational scalar used everywhere; no floating point in the library.
using Rational = mpq_class;

enum class ErrorKind {
  Input,
  Precondition,
  GroundExhausted,
  CapExceeded,
  NotAMember,
  Inadmissible,
  InvalidTree,
  InvalidSystem,
  EmptyResult,
  BadPath,
  NotAntichain,
  WeightTooLarge,
  BoundViolated,
  GroundMismatch,
  RoundsExhausted,
  NotSuccessive,
  NotDependent,
  Internal,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Thrown by tree validation; carries one line per violated condition.
class InvalidTreeError : public Error {
 public:
  explicit InvalidTreeError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  std::vector<std::string> violations_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

/// CLI exit code for an error kind: 3 for resource exhaustion, 2 otherwise.
int exit_code(ErrorKind kind);

// Rationals serialize as "p/q" in lowest terms, integers as "p".
std::string format(const Rational& q);
Rational parse_rational(std::string_view text);

inline Rational abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

/// Safety caps, overridable through the environment.
std::size_t tree_cap();     // TSF_CAP_TREES
std::size_t support_cap();  // TSF_CAP_SUPPORT

}  // namespace tsf
