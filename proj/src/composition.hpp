#pragma once
#include "reduction.hpp"
#include "transport.hpp"

namespace tc {

// Expression graph with a geometric realization: a path per edge inside a
// planar chart, plus an optional connection used when the graph is evaluated.
struct TransportGraph {
  Graph graph;
  std::map<Edge, PathSpec> realization;
  Rect chart{0, 0, 1, 1};
  std::optional<ConnectionSpec> conn;
};

void validate_transport_graph(const TransportGraph& tg);

// Formal sum of transport graphs; arities are the componentwise maxima of the
// summands' blue boundary counts (object addition).
struct Multitangle {
  std::vector<TransportGraph> summands;
  std::size_t source_arity = 0, target_arity = 0;
};

Multitangle make_multitangle(std::vector<TransportGraph> summands);
Multitangle empty_multitangle(std::size_t source_arity, std::size_t target_arity);

Graph disjoint_union(const Graph& g, const Graph& h);
TransportGraph disjoint_union(const TransportGraph& g, const TransportGraph& h);

// Edgeless expression graph on a boundary's slots (source order = slot order).
Graph boundary_graph(const Boundary& b);

bool gluable(const Graph& h, const Graph& g);
// Pushout identifying S(h) with T(g); keeps g's vertices for glued pairs.
Graph glue(const Graph& h, const Graph& g);
// Also concatenates charts horizontally and glues connections at the seam.
TransportGraph glue(const TransportGraph& h, const TransportGraph& g);

// Glue T(g) onto the contiguous segment [begin, begin+count) of S(h);
// same-color slots only. count = |T(g)| is required.
Graph glue_at(const Graph& h, const Graph& g, std::size_t begin, std::size_t count);

Multitangle add(const Multitangle& m, const Multitangle& n);
// Bilinear composition: summands n_j * m_i for all pairs, i (right operand m)
// major; boundaries padded with trailing identity cylinders to the shared
// arity first.
Multitangle compose_multitangles(const Multitangle& n, const Multitangle& m);

// k parallel blue wires across a unit-width chart of height k.
TransportGraph identity_cylinder(int wires = 1, const std::string& id_prefix = "w");

}  // namespace tc
