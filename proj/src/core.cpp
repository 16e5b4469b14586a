#include "tsf/core.hpp"

#include <cstdlib>
#include <sstream>

namespace tsf {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Input: return "InputError";
    case ErrorKind::Precondition: return "PreconditionViolated";
    case ErrorKind::GroundExhausted: return "GroundExhausted";
    case ErrorKind::CapExceeded: return "CapExceeded";
    case ErrorKind::NotAMember: return "NotAMember";
    case ErrorKind::Inadmissible: return "Inadmissible";
    case ErrorKind::InvalidTree: return "InvalidTree";
    case ErrorKind::InvalidSystem: return "InvalidSystem";
    case ErrorKind::EmptyResult: return "EmptyResult";
    case ErrorKind::BadPath: return "BadPath";
    case ErrorKind::NotAntichain: return "NotAntichain";
    case ErrorKind::WeightTooLarge: return "WeightTooLarge";
    case ErrorKind::BoundViolated: return "BoundViolated";
    case ErrorKind::GroundMismatch: return "GroundMismatch";
    case ErrorKind::RoundsExhausted: return "RoundsExhausted";
    case ErrorKind::NotSuccessive: return "NotSuccessive";
    case ErrorKind::NotDependent: return "NotDependent";
    case ErrorKind::Internal: return "InternalError";
  }
  return "Error";
}

namespace {
std::string join_violations(const std::vector<std::string>& v) {
  std::ostringstream os;
  os << "invalid tree:";
  for (const auto& s : v) os << "\n  - " << s;
  return os.str();
}

std::size_t env_cap(const char* name, std::size_t fallback) {
  const char* raw = std::getenv(name);
  if (raw == nullptr || *raw == '\0') return fallback;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(raw, &end, 10);
  if (end == raw || *end != '\0' || v == 0) return fallback;
  return static_cast<std::size_t>(v);
}
}  // namespace

InvalidTreeError::InvalidTreeError(std::vector<std::string> violations)
    : Error(ErrorKind::InvalidTree, join_violations(violations)), violations_(std::move(violations)) {}

void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, std::string(to_string(kind)) + ": " + what);
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::GroundExhausted:
    case ErrorKind::CapExceeded:
      return 3;
    default:
      return 2;
  }
}

std::string format(const Rational& q) { return q.get_str(); }

Rational parse_rational(std::string_view text) {
  std::string s(text);
  const auto slash = s.find('/');
  auto valid_int = [](const std::string& t) {
    if (t.empty()) return false;
    std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9') return false;
    return true;
  };
  std::string num = s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!num.empty() && num[0] == '+') num.erase(0, 1);
  if (!valid_int(num) || !valid_int(den) || den[0] == '-' || den[0] == '+')
    fail(ErrorKind::Input, "malformed rational '" + s + "'");
  mpz_class n(num), d(den);
  if (d == 0) fail(ErrorKind::Input, "zero denominator in '" + s + "'");
  Rational q(n, d);
  q.canonicalize();
  return q;
}

std::size_t tree_cap() { return env_cap("TSF_CAP_TREES", 50'000'000); }
std::size_t support_cap() { return env_cap("TSF_CAP_SUPPORT", 1u << 20); }

}  // namespace tsf
