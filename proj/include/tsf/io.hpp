#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "tsf/distortion.hpp"
#include "tsf/finset.hpp"
#include "tsf/measures.hpp"
#include "tsf/norms.hpp"
#include "tsf/params.hpp"
#include "tsf/schreier.hpp"
#include "tsf/trees.hpp"

// JSON forms of every domain type. Rationals are strings "p/q" in lowest terms;
// objects keep sorted keys, so dump() output is canonical.
namespace tsf::io {

using json = nlohmann::json;

/// Parses text, reporting syntax errors as Input errors with line and column.
json parse(const std::string& text, const std::string& source = "input");
json load(const std::string& path);
/// Compact, key-sorted serialization.
std::string canonical(const json& j);

json encode(const Rational& q);
json encode(const FinSet& f);
json encode(const SetFamily& fam);
json encode(const Vector& x);
json encode(const Measure& mu);
json encode(const GroundSet& g);
json encode(const ParamSystem& sys);
json encode(const ApTree& t);
json encode(const Check& c);
json encode(const std::vector<Check>& cs);
json encode(const SystemReport& r);
json encode(const GoodReport& r);
json encode(const schreier::GreedyDecomposition& d);
json encode(const NormCertificate& c);
json encode(const Decomposition& d);
json encode(const AverageReport& r);
json encode(const RoundRecord& r);
json encode(const AFunctional& f);
json encode(const Renorm& r);
json encode(const PairReport& r);
json encode(const HiReport& r);
json encode(const BoundCheck& b);

// Decoders take the field path used in diagnostics ("M[2]", "children[0].I").
Rational decode_rational(const json& j, const std::string& path);
Index decode_index(const json& j, const std::string& path);
FinSet decode_finset(const json& j, const std::string& path = "set");
SetFamily decode_family(const json& j, const std::string& path = "family");
Vector decode_vector(const json& j, const std::string& path = "vector");
Measure decode_measure(const json& j, const std::string& path = "measure");
GroundSet decode_ground(const json& j, const std::string& path = "ground");
/// {"M", "L", "N", "mode"}; L may be omitted in relaxed mode.
ParamSystem decode_params(const json& j, const std::string& path = "params");
ApTree decode_tree(const json& j, const std::string& path = "tree");
/// An array of trees, or {"trees": [...]}.
std::vector<ApTree> decode_trees(const json& j, const std::string& path = "trees");
/// An array of vectors, or {"blocks": [...]}.
std::vector<Vector> decode_blocks(const json& j, const std::string& path = "blocks");

}  // namespace tsf::io
