#include "tsf/io.hpp"

#include <fstream>
#include <sstream>

namespace tsf::io {

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& what) {
  fail(ErrorKind::Input, "field '" + path + "': " + what);
}

const json& field(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) bad(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) bad(path, std::string("missing key \"") + key + "\"");
  return *it;
}

std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }
std::string dot(const std::string& path, const char* key) { return path + "." + key; }

json ints(std::span<const Index> xs) {
  json a = json::array();
  for (Index x : xs) a.push_back(x);
  return a;
}

template <class Tag>
json sparse(const Sparse<Tag>& s) {
  json e = json::array();
  for (const auto& [i, q] : s.entries()) e.push_back(json::array({i, encode(q)}));
  return json{{"entries", std::move(e)}};
}

template <class Tag>
Sparse<Tag> decode_sparse(const json& j, const std::string& path) {
  const json& e = field(j, "entries", path);
  if (!e.is_array()) bad(dot(path, "entries"), "expected an array");
  std::vector<typename Sparse<Tag>::Entry> out;
  for (std::size_t k = 0; k < e.size(); ++k) {
    const std::string p = at(dot(path, "entries"), k);
    if (!e[k].is_array() || e[k].size() != 2) bad(p, "expected [index, \"p/q\"]");
    const Index i = decode_index(e[k][0], p + "[0]");
    if (i < 1) bad(p + "[0]", "indices start at 1");
    out.emplace_back(i, decode_rational(e[k][1], p + "[1]"));
  }
  try {
    return Sparse<Tag>::from_entries(std::move(out));
  } catch (const Error& err) {
    bad(path, err.what());
  }
}

}  // namespace

json parse(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    fail(ErrorKind::Input, source + ": line " + std::to_string(line) + ", column " + std::to_string(col) +
                               ": malformed JSON");
  }
}

json load(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Input, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

std::string canonical(const json& j) { return j.dump(); }

// ---------------------------------------------------------------------------

json encode(const Rational& q) { return format(q); }
json encode(const FinSet& f) { return ints(f.elements()); }

json encode(const SetFamily& fam) {
  json a = json::array();
  for (const auto& m : fam.members()) a.push_back(encode(m));
  return a;
}

json encode(const Vector& x) { return sparse(x); }
json encode(const Measure& mu) { return sparse(mu); }

json encode(const GroundSet& g) {
  json j{{"prefix", ints(g.prefix())}};
  if (g.tail()) j["tail"] = {{"start", g.tail()->start}, {"step", g.tail()->step}};
  return j;
}

json encode(const ParamSystem& sys) {
  return {{"M", encode(sys.M())}, {"L", encode(sys.L())}, {"N", encode(sys.N())}, {"mode", to_string(sys.mode())}};
}

json encode(const ApTree& t) {
  json c = json::array();
  for (const auto& ch : t.children) c.push_back(encode(ch));
  return {{"m", t.m}, {"I", encode(t.I)}, {"sign", t.sign}, {"children", std::move(c)}};
}

json encode(const Check& c) { return {{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}}; }

json encode(const std::vector<Check>& cs) {
  json a = json::array();
  for (const auto& c : cs) a.push_back(encode(c));
  return a;
}

json encode(const SystemReport& r) {
  return {{"checks", encode(r.checks)}, {"strict_valid", r.strict_valid}, {"relaxed_valid", r.relaxed_valid}};
}

json encode(const GoodReport& r) {
  json rows = json::array();
  for (const auto& g : r.rows) rows.push_back({{"j", g.j}, {"f", g.f}, {"l", g.l}, {"n", g.n}, {"pass", g.pass}});
  return {{"rows", std::move(rows)}, {"pass", r.pass}};
}

json encode(const schreier::GreedyDecomposition& d) {
  json blocks = json::array();
  for (const auto& b : d.blocks) blocks.push_back(encode(b));
  json j{{"blocks", std::move(blocks)}, {"ok", d.ok()}};
  if (d.failed_at) j["failed_at"] = *d.failed_at;
  return j;
}

json encode(const NormCertificate& c) {
  json j{{"value", encode(c.value)}};
  std::visit(
      [&](const auto& w) {
        using W = std::decay_t<decltype(w)>;
        if constexpr (std::is_same_v<W, FinSet>) {
          j["witness"] = {{"set", encode(w)}};
        } else if constexpr (std::is_same_v<W, std::vector<SignedInterval>>) {
          json a = json::array();
          for (const auto& s : w) a.push_back({{"lo", s.lo}, {"hi", s.hi}, {"sign", s.sign}});
          j["witness"] = {{"intervals", std::move(a)}};
        } else if constexpr (std::is_same_v<W, ApTree>) {
          j["witness"] = {{"tree", encode(w)}};
        } else {
          j["witness"] = nullptr;
        }
      },
      c.witness);
  return j;
}

json encode(const Decomposition& d) {
  json parts = json::array();
  for (const auto& p : d.parts) {
    json path = json::array();
    for (auto s : p.path) path.push_back(s);
    parts.push_back({{"path", std::move(path)},
                     {"lambda", encode(p.lambda)},
                     {"class", to_string(p.cls)},
                     {"n_alpha", p.n_alpha},
                     {"tree", encode(p.tree)}});
  }
  return {{"j", d.j}, {"f_j", d.f_j}, {"parts", std::move(parts)}};
}

json encode(const AverageReport& r) {
  json used = json::array();
  for (auto n : r.used) used.push_back(n);
  json j{{"vector", encode(r.vector)}, {"weights", encode(r.weights)}, {"used", std::move(used)},
         {"xi", r.xi},                 {"eps", encode(r.eps)},         {"achieved", encode(r.achieved)},
         {"rounds", r.rounds}};
  if (r.norm) j["norm"] = encode(*r.norm);
  return j;
}

json encode(const RoundRecord& r) {
  return {{"round", r.round}, {"ground", ints(r.ground)}, {"norm", encode(r.norm)}};
}

json encode(const AFunctional& f) {
  json parts = json::array();
  for (const auto& t : f.parts) parts.push_back(encode(t));
  return {{"j", f.j}, {"parts", std::move(parts)}};
}

json encode(const Renorm& r) {
  return {{"value", encode(r.value)}, {"norm", encode(r.norm)}, {"sup", encode(r.sup)}, {"functional", encode(r.functional)}};
}

json encode(const PairReport& r) {
  return {{"j0", r.j0},
          {"j", r.j},
          {"d", encode(r.d)},
          {"v0", encode(r.v0)},
          {"w0", encode(r.w0)},
          {"v", encode(r.v)},
          {"w", encode(r.w)},
          {"v_renorm", encode(r.v_renorm)},
          {"w_renorm", encode(r.w_renorm)},
          {"ratio", encode(r.ratio)},
          {"target_v", encode(r.target_v)},
          {"target_w", encode(r.target_w)},
          {"target_ratio", encode(r.target_ratio)},
          {"v_meets", r.v_meets},
          {"w_meets", r.w_meets},
          {"ratio_meets", r.ratio_meets},
          {"x0", encode(r.x0)},
          {"x0_value", encode(r.x0_value)},
          {"vx_count", r.vx_count},
          {"vx_degree", r.vx_degree}};
}

json encode(const HiReport& r) {
  json a = json::array();
  for (const auto& q : r.a) a.push_back(encode(q));
  return {{"t", ints(r.t)},
          {"a", std::move(a)},
          {"repeated_average", r.repeated_average},
          {"maximal", r.maximal},
          {"lower", {{"lhs", encode(r.lower_lhs)}, {"rhs", encode(r.lower_rhs)}}},
          {"upper", {{"lhs", encode(r.upper_lhs)}, {"rhs", encode(r.upper_rhs)}}},
          {"cond1", r.cond1},
          {"cond2", r.cond2}};
}

json encode(const BoundCheck& b) {
  return {{"hypotheses", encode(b.hypotheses)},
          {"applicable", b.applicable},
          {"value", encode(b.value)},
          {"bound", encode(b.bound)},
          {"holds", b.holds}};
}

// ---------------------------------------------------------------------------

Rational decode_rational(const json& j, const std::string& path) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (!j.is_string()) bad(path, "expected a rational string \"p/q\" or an integer");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const Error& e) {
    bad(path, e.what());
  }
}

Index decode_index(const json& j, const std::string& path) {
  if (!j.is_number_integer()) bad(path, "expected an integer");
  return j.get<Index>();
}

FinSet decode_finset(const json& j, const std::string& path) {
  if (!j.is_array()) bad(path, "expected an array of integers");
  std::vector<Index> xs;
  for (std::size_t k = 0; k < j.size(); ++k) xs.push_back(decode_index(j[k], at(path, k)));
  try {
    return FinSet(std::move(xs));
  } catch (const Error& e) {
    bad(path, e.what());
  }
}

SetFamily decode_family(const json& j, const std::string& path) {
  if (!j.is_array()) bad(path, "expected an array of sets");
  std::vector<FinSet> sets;
  for (std::size_t k = 0; k < j.size(); ++k) sets.push_back(decode_finset(j[k], at(path, k)));
  try {
    return SetFamily(std::move(sets));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::NotSuccessive) throw;
    bad(path, e.what());
  }
}

Vector decode_vector(const json& j, const std::string& path) { return decode_sparse<VectorTag>(j, path); }
Measure decode_measure(const json& j, const std::string& path) { return decode_sparse<MeasureTag>(j, path); }

GroundSet decode_ground(const json& j, const std::string& path) {
  if (j.is_array()) {
    std::vector<Index> xs;
    for (std::size_t k = 0; k < j.size(); ++k) xs.push_back(decode_index(j[k], at(path, k)));
    try {
      return GroundSet(std::move(xs));
    } catch (const Error& e) {
      bad(path, e.what());
    }
  }
  if (!j.is_object()) bad(path, "expected an array or {\"prefix\", \"tail\"}");
  std::vector<Index> xs;
  if (auto it = j.find("prefix"); it != j.end()) {
    if (!it->is_array()) bad(dot(path, "prefix"), "expected an array");
    for (std::size_t k = 0; k < it->size(); ++k) xs.push_back(decode_index((*it)[k], at(dot(path, "prefix"), k)));
  }
  std::optional<GroundSet::Tail> tail;
  if (auto it = j.find("tail"); it != j.end() && !it->is_null()) {
    const std::string tp = dot(path, "tail");
    tail = GroundSet::Tail{decode_index(field(*it, "start", tp), dot(tp, "start")),
                           decode_index(field(*it, "step", tp), dot(tp, "step"))};
  }
  try {
    return GroundSet(std::move(xs), tail);
  } catch (const Error& e) {
    bad(path, e.what());
  }
}

ParamSystem decode_params(const json& j, const std::string& path) {
  if (!j.is_object()) bad(path, "expected an object with M, N (and L)");
  Mode mode = Mode::Strict;
  if (auto it = j.find("mode"); it != j.end()) {
    if (*it == "strict") {
      mode = Mode::Strict;
    } else if (*it == "relaxed") {
      mode = Mode::Relaxed;
    } else {
      bad(dot(path, "mode"), "expected \"strict\" or \"relaxed\"");
    }
  }
  GroundSet m = decode_ground(field(j, "M", path), dot(path, "M"));
  GroundSet n = decode_ground(field(j, "N", path), dot(path, "N"));
  GroundSet l;
  if (auto it = j.find("L"); it != j.end()) l = decode_ground(*it, dot(path, "L"));
  return ParamSystem(std::move(m), std::move(l), std::move(n), mode);
}

ApTree decode_tree(const json& j, const std::string& path) {
  if (!j.is_object()) bad(path, "expected a tree object");
  ApTree t;
  t.m = decode_index(field(j, "m", path), dot(path, "m"));
  t.I = decode_finset(field(j, "I", path), dot(path, "I"));
  if (auto it = j.find("sign"); it != j.end()) {
    const Index s = decode_index(*it, dot(path, "sign"));
    if (s != 1 && s != -1) bad(dot(path, "sign"), "expected 1 or -1");
    t.sign = static_cast<int>(s);
  }
  if (auto it = j.find("children"); it != j.end()) {
    if (!it->is_array()) bad(dot(path, "children"), "expected an array");
    for (std::size_t k = 0; k < it->size(); ++k) t.children.push_back(decode_tree((*it)[k], at(dot(path, "children"), k)));
  }
  return t;
}

std::vector<ApTree> decode_trees(const json& j, const std::string& path) {
  const json& a = j.is_object() ? field(j, "trees", path) : j;
  if (!a.is_array()) bad(path, "expected an array of trees");
  std::vector<ApTree> out;
  for (std::size_t k = 0; k < a.size(); ++k) out.push_back(decode_tree(a[k], at(path, k)));
  return out;
}

std::vector<Vector> decode_blocks(const json& j, const std::string& path) {
  const json& a = j.is_object() ? field(j, "blocks", path) : j;
  if (!a.is_array()) bad(path, "expected an array of vectors");
  std::vector<Vector> out;
  for (std::size_t k = 0; k < a.size(); ++k) out.push_back(decode_vector(a[k], at(path, k)));
  return out;
}

}  // namespace tsf::io
