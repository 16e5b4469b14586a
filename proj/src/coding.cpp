#include "tsf/coding.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <fstream>

#include "tsf/io.hpp"
#include "tsf/schreier.hpp"

namespace tsf {

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    fail(ErrorKind::Internal, "SHA-256 failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int k = 0; k < len; ++k) {
    out += hex[md[k] >> 4];
    out += hex[md[k] & 15];
  }
  return out;
}

std::string serialize(const std::vector<ApTree>& seq) {
  io::json a = io::json::array();
  for (const auto& t : seq) a.push_back(io::encode(t));
  return io::canonical(a);
}

// ---------------------------------------------------------------------------

SigmaRegistry::SigmaRegistry(std::string path) : path_(std::move(path)) {
  std::ifstream in(path_);
  if (!in) return;  // starts empty
  std::string line;
  std::size_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (line.empty()) continue;
    const std::string where = path_ + ":" + std::to_string(no);
    const io::json j = io::parse(line, where);
    if (!j.is_object() || !j.contains("hash") || !j.contains("payload") || !j.contains("index") ||
        !j["hash"].is_string() || !j["payload"].is_string() || !j["index"].is_number_unsigned())
      fail(ErrorKind::Input, where + ": expected {\"hash\", \"payload\", \"index\"}");
    Record r{j["hash"], j["payload"], j["index"].get<std::size_t>()};
    if (sha256_hex(r.payload) != r.hash) fail(ErrorKind::Input, where + ": hash does not match payload");
    if (r.index == 0 || r.index % 2 != 0) fail(ErrorKind::Input, where + ": index must be a positive even number");
    if (by_payload_.count(r.payload) || used_.count(r.index))
      fail(ErrorKind::Input, where + ": duplicate payload or index");
    insert(std::move(r));
  }
}

void SigmaRegistry::insert(Record r) {
  used_.insert(r.index);
  std::string key = r.payload;
  by_payload_.emplace(std::move(key), std::move(r));
}

std::optional<SigmaRegistry::Record> SigmaRegistry::lookup(const std::string& payload) const {
  std::lock_guard lock(mu_);
  auto it = by_payload_.find(payload);
  if (it == by_payload_.end()) return std::nullopt;
  return it->second;
}

SigmaRegistry::Record SigmaRegistry::assign(const std::string& payload, Index floor, const ParamSystem& sys) {
  std::lock_guard lock(mu_);
  if (auto it = by_payload_.find(payload); it != by_payload_.end()) return it->second;
  std::size_t index = 2;
  for (;; index += 2) {
    if (!sys.M().has(index - 1))
      fail(ErrorKind::GroundExhausted, "no unused even-indexed weight exceeds " + std::to_string(floor));
    if (!used_.count(index) && sys.m(index) > floor) break;
  }
  Record r{sha256_hex(payload), payload, index};
  if (!path_.empty()) {
    std::ofstream out(path_, std::ios::app);
    if (!out) fail(ErrorKind::Input, "cannot append to " + path_);
    out << io::canonical({{"hash", r.hash}, {"payload", r.payload}, {"index", r.index}}) << '\n';
    if (!out) fail(ErrorKind::Input, "write to " + path_ + " failed");
  }
  insert(r);
  return r;
}

std::size_t SigmaRegistry::size() const {
  std::lock_guard lock(mu_);
  return by_payload_.size();
}

std::vector<SigmaRegistry::Record> SigmaRegistry::records() const {
  std::lock_guard lock(mu_);
  std::vector<Record> out;
  for (const auto& [_, r] : by_payload_) out.push_back(r);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

void check_sequence(const std::vector<ApTree>& seq, const ParamSystem& sys) {
  if (seq.empty()) fail(ErrorKind::Input, "empty tree sequence");
  for (const auto& t : seq) validate(t, sys);
  for (std::size_t k = 1; k < seq.size(); ++k)
    if (!precedes(seq[k - 1].I, seq[k].I))
      fail(ErrorKind::NotSuccessive, "trees " + std::to_string(k) + " and " + std::to_string(k + 1) + " are not successive");
}

bool admissible(const std::vector<ApTree>& seq, Index p) {
  if (p < 0 || p > schreier::kDefaultOrderCap) fail(ErrorKind::CapExceeded, "order p out of range");
  std::vector<FinSet> sets;
  for (const auto& t : seq) sets.push_back(t.I);
  return schreier::is_admissible(SetFamily(std::move(sets)), 1, static_cast<int>(p));
}

}  // namespace

SigmaValue sigma_assign(const std::vector<ApTree>& seq, SigmaRegistry& reg, const ParamSystem& sys) {
  check_sequence(seq, sys);
  Index floor = 0;
  for (const auto& t : seq) floor = std::max(floor, weight(t));
  const auto r = reg.assign(serialize(seq), floor, sys);
  return {r.index, sys.m(r.index)};
}

Verdict is_dependent(const std::vector<ApTree>& seq, Index p, SigmaRegistry& reg, const ParamSystem& sys) {
  Verdict v;
  if (seq.empty()) {
    v.reasons.push_back("empty sequence");
    return v;
  }
  for (std::size_t k = 0; k < seq.size(); ++k)
    if (!tree_violations(seq[k], sys).empty()) v.reasons.push_back("tree " + std::to_string(k + 1) + " is not appropriate");
  for (std::size_t k = 1; k < seq.size(); ++k)
    if (!precedes(seq[k - 1].I, seq[k].I)) {
      v.reasons.push_back("not successive");
      break;
    }
  if (!v.reasons.empty()) return v;

  if (!admissible(seq, p)) v.reasons.push_back("not S_" + std::to_string(p) + "-admissible");
  const std::size_t j1 = sys.weight_index(weight(seq[0]));
  if (j1 == 0 || j1 % 2 != 0 || static_cast<Index>(j1) <= p)  // j_1 = j1/2 > p/2
    v.reasons.push_back("w(T_1) is not m_{2j} with j > p/2");
  for (std::size_t i = 2; i <= seq.size(); ++i) {
    const std::vector<ApTree> prefix(seq.begin(), seq.begin() + static_cast<std::ptrdiff_t>(i - 1));
    try {
      if (sigma_assign(prefix, reg, sys).value != weight(seq[i - 1]))
        v.reasons.push_back("σ mismatch at i=" + std::to_string(i));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::GroundExhausted) throw;
      v.reasons.push_back("σ undefined at i=" + std::to_string(i));
    }
  }
  v.ok = v.reasons.empty();
  return v;
}

Verdict verify_extension(const std::vector<ApTree>& seq, const Extension& ext, Index p, SigmaRegistry& reg,
                         const ParamSystem& sys) {
  Verdict v;
  if (ext.l < 1) v.reasons.push_back("l must be positive");
  if (ext.full.size() != seq.size() + ext.k) v.reasons.push_back("full sequence length is not n + k");
  if (!v.reasons.empty()) return v;
  for (std::size_t i = 1; i <= seq.size(); ++i) {
    const ApTree& r = ext.full[ext.k + i - 1];
    bool same = false;
    if (!r.I.empty() && r.I.max() >= ext.l) {
      try {
        same = restrict(r, FinSet::interval(ext.l, r.I.max())) == seq[i - 1];
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::EmptyResult) throw;
      }
    }
    if (!same) v.reasons.push_back("restriction mismatch at i=" + std::to_string(i));
  }
  const Verdict dep = is_dependent(ext.full, p, reg, sys);
  v.reasons.insert(v.reasons.end(), dep.reasons.begin(), dep.reasons.end());
  v.ok = v.reasons.empty();
  return v;
}

Measure dependent_functional(const std::vector<ApTree>& seq, std::size_t i, Index p, SigmaRegistry& reg,
                             const ParamSystem& sys) {
  const std::size_t odd = 2 * i + 1;
  if (i < 1 || p != sys.n(odd)) fail(ErrorKind::Precondition, "p must equal n_{2i+1} for some i ≥ 1");
  const Verdict v = is_dependent(seq, p, reg, sys);
  if (!v.ok) {
    std::string msg = "sequence is not S_" + std::to_string(p) + "-dependent:";
    for (const auto& r : v.reasons) msg += " " + r + ";";
    fail(ErrorKind::NotDependent, msg);
  }
  Measure out;
  for (const auto& t : seq) out = out + mu_of(t);
  return out.scale(Rational(1, sys.m(odd)));
}

}  // namespace tsf
