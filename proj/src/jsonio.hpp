#pragma once
#include <nlohmann/json.hpp>

#include "circuits.hpp"

namespace tc {

using nlohmann::json;

inline constexpr const char* kSchema = "transportc/v1";

json to_json(const Graph& g);
Graph graph_from_json(const json& j);

json to_json(const Mat& m);  // row-major [re, im] pairs
Mat mat_from_json(const json& j);
json to_json(const CVec& v);
CVec cvec_from_json(const json& j);

json to_json(const PathSpec& p);
PathSpec path_from_json(const json& j);

// Pure-gauge and exact-backed sampled connections serialize as their grids.
json to_json(const ConnectionSpec& c);
ConnectionSpec conn_from_json(const json& j);

json to_json(const TransportGraph& tg);
TransportGraph transport_graph_from_json(const json& j);

json to_json(const Multitangle& m);
Multitangle multitangle_from_json(const json& j);

// Accepts presets {"preset":"matrix","k":2} / {"preset":"diagonal","n":3} /
// {"preset":"qubit"} or explicit matrices.
json to_json(const AlgebraSpec& a);
AlgebraSpec algebra_from_json(const json& j);

json to_json(const Circuit& c);
Circuit circuit_from_json(const json& j);

json expr_to_json(const ExprPtr& e);  // AST dump (not re-read)

// Reads a file, parses and checks the schema field; `kind` may be empty to
// accept any document kind.
json load_document(const std::string& path, const std::string& kind = "");
json tag(json j, const std::string& kind);  // adds schema + kind fields

}  // namespace tc
