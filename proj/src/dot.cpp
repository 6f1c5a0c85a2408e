#include "dot.hpp"

#include <sstream>

namespace tc {

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string render(const Graph& g, const std::map<Edge, Edge>* origin) {
  validate(g);
  LevelOrdering lo = level_order(g);
  std::ostringstream os;
  os << "digraph G {\n  rankdir=LR;\n  node [style=filled];\n";
  for (std::size_t l = 0; l < lo.levels.size(); ++l) {
    os << "  { rank=same;";
    for (const auto& id : lo.levels[l]) os << " " << quote(id) << ";";
    os << " }\n";
  }
  for (const auto& v : g.vertices)
    os << "  " << quote(v.id) << " [label=" << quote(v.label) << ", fillcolor="
       << (v.color == Color::blue ? "lightblue" : "palegreen") << "];\n";
  for (const auto& e : g.edges()) {
    bool identity = origin ? !origin->count(e)
                           : g.at(e.first).label == g.at(e.second).label;
    os << "  " << quote(e.first) << " -> " << quote(e.second)
       << (identity ? " [style=dashed]" : "") << ";\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace

std::string render_dot(const Graph& g) { return render(g, nullptr); }

std::string render_dot(const ReducedGraph& r) { return render(r.graph, &r.edge_origin); }

}  // namespace tc
