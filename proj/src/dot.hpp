#pragma once
#include "reduction.hpp"

namespace tc {

// Graphviz rendering: one rank per level, colors as fills, identity edges
// (equal endpoint labels; for reduced graphs, inserted edges) dashed.
std::string render_dot(const Graph& g);
std::string render_dot(const ReducedGraph& r);

}  // namespace tc
