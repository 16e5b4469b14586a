#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tsf/core.hpp"
#include "tsf/measures.hpp"
#include "tsf/params.hpp"
#include "tsf/trees.hpp"

namespace tsf {

/// Lazily realized injection σ from successive tree sequences into {m_{2k}}.
/// Keys are canonical JSON serializations; values are even weight indices.
/// With a path, existing JSON-lines records are loaded and new assignments are
/// appended as {"hash", "payload", "index"}.
class SigmaRegistry {
 public:
  struct Record {
    std::string hash;  // SHA-256 of payload, hex
    std::string payload;
    std::size_t index;  // 2k
  };

  SigmaRegistry() = default;
  explicit SigmaRegistry(std::string path);

  std::optional<Record> lookup(const std::string& payload) const;
  /// Returns the existing record, or records the least unused even index 2k
  /// with m_{2k} > floor. Check and insert happen under one lock.
  Record assign(const std::string& payload, Index floor, const ParamSystem& sys);

  std::size_t size() const;
  std::vector<Record> records() const;
  const std::string& path() const noexcept { return path_; }

 private:
  void insert(Record r);

  std::string path_;
  mutable std::mutex mu_;
  std::map<std::string, Record> by_payload_;
  std::set<std::size_t> used_;
};

std::string sha256_hex(const std::string& data);

/// Canonical serialization of a tree sequence.
std::string serialize(const std::vector<ApTree>& seq);

struct SigmaValue {
  std::size_t index;  // 2k
  Index value;        // m_{2k}
};

/// σ(T_1, ..., T_n): registered value, or the least unused m_{2k} > max w(T_i).
/// Throws InvalidTree / NotSuccessive for bad input, GroundExhausted when M runs out.
SigmaValue sigma_assign(const std::vector<ApTree>& seq, SigmaRegistry& reg, const ParamSystem& sys);

struct Verdict {
  bool ok = false;
  std::vector<std::string> reasons;  // one per failed clause
};

/// S_p-dependence: S_p-admissible, w(T_1) = m_{2j_1} with j_1 > p/2, and
/// σ(T_1..T_{i-1}) = w(T_i) for 2 ≤ i ≤ n. σ values are drawn from reg.
Verdict is_dependent(const std::vector<ApTree>& seq, Index p, SigmaRegistry& reg, const ParamSystem& sys);

struct Extension {
  Index l = 1;
  std::size_t k = 0;
  std::vector<ApTree> full;  // R_1 < ... < R_{n+k}
};

/// R_{k+i}|[l, ∞) = T_i for i ≤ n and the full sequence is S_p-dependent.
Verdict verify_extension(const std::vector<ApTree>& seq, const Extension& ext, Index p, SigmaRegistry& reg,
                         const ParamSystem& sys);

/// (μ_{T_1} + ... + μ_{T_k}) / m_{2i+1} for an S_p-dependent sequence, p = n_{2i+1}.
/// Throws NotDependent otherwise.
Measure dependent_functional(const std::vector<ApTree>& seq, std::size_t i, Index p, SigmaRegistry& reg,
                             const ParamSystem& sys);

}  // namespace tsf
