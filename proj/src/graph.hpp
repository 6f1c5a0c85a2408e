#pragma once
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace tc {

enum class Color { blue, green };

inline const char* color_name(Color c) { return c == Color::blue ? "blue" : "green"; }

struct Vertex {
  std::string id;
  std::string label;
  Color color = Color::blue;
};

using Edge = std::pair<std::string, std::string>;

inline std::string edge_str(const Edge& e) { return e.first + "->" + e.second; }

// Labeled 2-colored DAG with explicit source ordering and per-vertex
// orderings of outgoing edges. Orders are stored, never inferred.
struct Graph {
  std::vector<Vertex> vertices;
  std::vector<std::string> source_order;              // total order on S(G)
  std::map<std::string, std::vector<std::string>> out; // ordered out-neighbors

  const Vertex* find(const std::string& id) const;
  const Vertex& at(const std::string& id) const;       // throws UnknownVertex
  bool has_edge(const std::string& u, const std::string& v) const;
  std::vector<Edge> edges() const;                     // by (vertex order, out order)
  const std::vector<std::string>& out_of(const std::string& id) const;
  std::vector<std::string> in_of(const std::string& id) const; // unordered

  void add_vertex(std::string id, std::string label, Color color = Color::blue);
  void add_edge(const std::string& u, const std::string& v);
};

// Convenience builder for tests/fixtures: vertices as (id,label,color),
// edges appended in the order given (defining out_orders), source_order =
// sources in vertex order unless overridden.
Graph make_graph(const std::vector<Vertex>& vs, const std::vector<Edge>& es,
                 const std::vector<std::string>& source_order = {});

struct LevelOrdering {
  std::vector<std::vector<std::string>> levels;
  int level_of(const std::string& id) const;           // 1-based, 0 if absent
  int pos_in_level(const std::string& id) const;       // 0-based, -1 if absent

 private:
  mutable std::map<std::string, std::pair<int, int>> idx;  // id -> (level, pos)
  mutable bool indexed = false;
  void build_index() const;
};

struct Slot {
  Color color;
  std::string id;
  bool operator==(const Slot&) const = default;
};

struct Boundary {
  std::vector<Slot> slots;
  std::size_t blue_count() const;
  bool operator==(const Boundary&) const = default;
};

// Checks all structural invariants; throws CycleDetected, SelfLoop,
// ParallelEdge or IncompleteOrdering naming the offender.
void validate(const Graph& g);

// Level partition + intra-level orders by the propagation rule: level 1 is
// source_order; each next level lists the not-yet-placed out-neighbors of the
// previous level's vertices, scanned in level order and per-vertex out order.
LevelOrdering level_order(const Graph& g);

// Incoming edges of v ordered by where their wires arrive at v's level once
// level-skipping edges are extended by identity chains (the order is therefore
// stable under gluing, which can shift source levels).
std::vector<Edge> in_edge_order(const Graph& g, const std::string& v);
std::vector<Edge> in_edge_order(const Graph& g, const std::string& v,
                                const LevelOrdering& lo);
// Arrival orders for every vertex in one sweep (vertices with no in-edges are
// absent from the map).
std::map<std::string, std::vector<Edge>> in_edge_orders(const Graph& g,
                                                        const LevelOrdering& lo);

Boundary sources(const Graph& g);
// Target boundary: the last level of the fully normalized graph, with each
// inserted identity copy reported under its original vertex. Defined in
// reduction.cpp so that gluing along targets agrees with reduction.
Boundary targets(const Graph& g);

struct Isomorphism {
  std::map<std::string, std::string> map;  // g id -> h id
};

// The unique color-, level- and order-preserving isomorphism, if any.
// Labels are compared only when match_labels is set (boundary gluing
// identifies differently-labeled vertices).
std::optional<Isomorphism> find_expression_iso(const Graph& g, const Graph& h,
                                               bool match_labels = false);

}  // namespace tc
