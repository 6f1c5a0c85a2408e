#pragma once
#include "graph.hpp"

namespace tc {

// Output of the reduction pipeline. Every edge of `graph` either carries one
// original edge (edge_origin) or is an inserted identity edge; every vertex
// maps back to the original vertex it copies.
struct ReducedGraph {
  Graph graph;
  std::map<std::string, std::string> vertex_origin;  // id -> original id
  std::map<Edge, Edge> edge_origin;                  // generator -> original
  bool is_identity_edge(const Edge& e) const { return !edge_origin.count(e); }
};

// Individual passes (each returns the rewritten graph).
Graph split_fan_in(const Graph& g);    // indegree <= 2, left-nested merges
Graph split_fan_out(const Graph& g);   // outdegree <= 2, dual nesting
Graph separate_shared(const Graph& g); // no edge both in a fan-in and fan-out
Graph normalize_levels(const Graph& g); // identity extension + deskewing

// Full pipeline with provenance; deterministic.
ReducedGraph reduce(const Graph& g);

bool is_reduced(const Graph& g);

}  // namespace tc
