#include "graph.hpp"

#include <algorithm>
#include <set>

namespace tc {

const Vertex* Graph::find(const std::string& id) const {
  for (const auto& v : vertices)
    if (v.id == id) return &v;
  return nullptr;
}

const Vertex& Graph::at(const std::string& id) const {
  const Vertex* v = find(id);
  if (!v) throw err("UnknownVertex", "no vertex with id '" + id + "'");
  return *v;
}

bool Graph::has_edge(const std::string& u, const std::string& v) const {
  auto it = out.find(u);
  if (it == out.end()) return false;
  return std::find(it->second.begin(), it->second.end(), v) != it->second.end();
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> es;
  for (const auto& v : vertices) {
    auto it = out.find(v.id);
    if (it == out.end()) continue;
    for (const auto& t : it->second) es.emplace_back(v.id, t);
  }
  return es;
}

const std::vector<std::string>& Graph::out_of(const std::string& id) const {
  static const std::vector<std::string> none;
  auto it = out.find(id);
  return it == out.end() ? none : it->second;
}

std::vector<std::string> Graph::in_of(const std::string& id) const {
  std::vector<std::string> ins;
  for (const auto& [u, ts] : out)
    for (const auto& t : ts)
      if (t == id) ins.push_back(u);
  return ins;
}

void Graph::add_vertex(std::string id, std::string label, Color color) {
  vertices.push_back({std::move(id), std::move(label), color});
}

void Graph::add_edge(const std::string& u, const std::string& v) {
  out[u].push_back(v);
}

Graph make_graph(const std::vector<Vertex>& vs, const std::vector<Edge>& es,
                 const std::vector<std::string>& source_order) {
  Graph g;
  g.vertices = vs;
  for (const auto& e : es) g.add_edge(e.first, e.second);
  if (!source_order.empty()) {
    g.source_order = source_order;
  } else {
    std::set<std::string> has_in;
    for (const auto& e : es) has_in.insert(e.second);
    for (const auto& v : vs)
      if (!has_in.count(v.id)) g.source_order.push_back(v.id);
  }
  return g;
}

void LevelOrdering::build_index() const {
  for (std::size_t i = 0; i < levels.size(); ++i)
    for (std::size_t j = 0; j < levels[i].size(); ++j)
      idx[levels[i][j]] = {static_cast<int>(i) + 1, static_cast<int>(j)};
  indexed = true;
}

int LevelOrdering::level_of(const std::string& id) const {
  if (!indexed) build_index();
  auto it = idx.find(id);
  return it == idx.end() ? 0 : it->second.first;
}

int LevelOrdering::pos_in_level(const std::string& id) const {
  if (!indexed) build_index();
  auto it = idx.find(id);
  return it == idx.end() ? -1 : it->second.second;
}

std::size_t Boundary::blue_count() const {
  std::size_t n = 0;
  for (const auto& s : slots)
    if (s.color == Color::blue) ++n;
  return n;
}

void validate(const Graph& g) {
  std::set<std::string> ids;
  for (const auto& v : g.vertices) {
    if (v.label.empty()) throw err("IncompleteOrdering", "vertex '" + v.id + "' has empty label");
    if (!ids.insert(v.id).second)
      throw err("IncompleteOrdering", "duplicate vertex id '" + v.id + "'");
  }
  std::map<std::string, int> indeg;
  for (const auto& [u, ts] : g.out) {
    if (!ids.count(u)) throw err("UnknownVertex", "edge source '" + u + "' not a vertex");
    std::set<std::string> seen;
    for (const auto& t : ts) {
      if (!ids.count(t)) throw err("UnknownVertex", "edge target '" + t + "' not a vertex");
      if (t == u) throw err("SelfLoop", "self-loop at '" + u + "'");
      if (!seen.insert(t).second)
        throw err("ParallelEdge", "parallel edge " + edge_str({u, t}));
      ++indeg[t];
    }
  }
  // source_order must cover exactly the vertices without incoming edges.
  std::set<std::string> src_set(g.source_order.begin(), g.source_order.end());
  if (src_set.size() != g.source_order.size())
    throw err("IncompleteOrdering", "duplicate entry in source_order");
  for (const auto& s : g.source_order)
    if (!ids.count(s)) throw err("UnknownVertex", "source_order entry '" + s + "' not a vertex");
  for (const auto& v : g.vertices) {
    bool is_src = indeg.find(v.id) == indeg.end();
    if (is_src && !src_set.count(v.id))
      throw err("IncompleteOrdering", "source vertex '" + v.id + "' missing from source_order");
    if (!is_src && src_set.count(v.id))
      throw err("IncompleteOrdering", "non-source vertex '" + v.id + "' listed in source_order");
  }
  // Acyclicity (Kahn).
  std::map<std::string, int> deg = indeg;
  std::vector<std::string> queue(g.source_order.begin(), g.source_order.end());
  std::size_t seen = 0;
  while (!queue.empty()) {
    std::string u = queue.back();
    queue.pop_back();
    ++seen;
    for (const auto& t : g.out_of(u))
      if (--deg[t] == 0) queue.push_back(t);
  }
  if (seen != g.vertices.size())
    throw err("CycleDetected", "graph contains a directed cycle");
}

LevelOrdering level_order(const Graph& g) {
  std::map<std::string, std::vector<std::string>> ins;
  for (const auto& [u, ts] : g.out)
    for (const auto& t : ts) ins[t].push_back(u);

  LevelOrdering lo;
  std::set<std::string> placed;
  std::vector<std::string> cur = g.source_order;
  for (const auto& v : cur) placed.insert(v);
  while (!cur.empty()) {
    lo.levels.push_back(cur);
    // Candidates: all in-neighbors already placed. Order: scan the previous
    // level in order; list each vertex's not-yet-listed out-neighbors in out
    // order; keep those that are ready.
    std::vector<std::string> next;
    std::set<std::string> listed;
    for (const auto& u : cur) {
      for (const auto& t : g.out_of(u)) {
        if (placed.count(t) || listed.count(t)) continue;
        bool ready = true;
        for (const auto& s : ins[t])
          if (!placed.count(s)) { ready = false; break; }
        if (ready) {
          next.push_back(t);
          listed.insert(t);
        }
      }
    }
    for (const auto& v : next) placed.insert(v);
    cur = next;
  }
  if (placed.size() != g.vertices.size())
    throw err("CycleDetected", "level ordering does not cover all vertices");
  return lo;
}

std::map<std::string, std::vector<Edge>> in_edge_orders(const Graph& g,
                                                        const LevelOrdering& lo) {
  // Order in-edges by where their wires arrive at the target's level once
  // every level-skipping edge is extended by identity chains. Extension
  // reroutes in place, so an in-transit wire keeps the slot of its original
  // edge; simulate that propagation with wire tokens instead of materializing
  // the chains.
  struct Item {
    bool wire;
    std::string u;  // real vertex (wire == false)
    Edge e;         // in-transit edge (wire == true)
  };
  std::map<std::string, std::vector<Edge>> arrival;
  if (lo.levels.empty()) return arrival;
  std::vector<Item> cur;
  for (const auto& s : lo.levels[0]) cur.push_back({false, s, {}});
  for (std::size_t l = 1; l < lo.levels.size(); ++l) {
    std::vector<Item> next;
    std::set<std::string> listed;
    auto deliver = [&](const Edge& e) {
      int lt = lo.level_of(e.second);
      if (lt == static_cast<int>(l) + 1) {
        arrival[e.second].push_back(e);
        if (listed.insert(e.second).second) next.push_back({false, e.second, {}});
      } else {
        next.push_back({true, "", e});
      }
    };
    for (const auto& it : cur) {
      if (it.wire)
        deliver(it.e);
      else
        for (const auto& t : g.out_of(it.u)) deliver({it.u, t});
    }
    cur = std::move(next);
  }
  return arrival;
}

std::vector<Edge> in_edge_order(const Graph& g, const std::string& v) {
  return in_edge_order(g, v, level_order(g));
}

std::vector<Edge> in_edge_order(const Graph& g, const std::string& v,
                                const LevelOrdering& lo) {
  g.at(v);
  auto arr = in_edge_orders(g, lo);
  auto it = arr.find(v);
  return it == arr.end() ? std::vector<Edge>{} : std::move(it->second);
}

Boundary sources(const Graph& g) {
  Boundary b;
  for (const auto& id : g.source_order) b.slots.push_back({g.at(id).color, id});
  return b;
}

std::optional<Isomorphism> find_expression_iso(const Graph& g, const Graph& h,
                                               bool match_labels) {
  LevelOrdering lg = level_order(g), lh = level_order(h);
  if (lg.levels.size() != lh.levels.size()) return std::nullopt;
  Isomorphism iso;
  for (std::size_t i = 0; i < lg.levels.size(); ++i) {
    if (lg.levels[i].size() != lh.levels[i].size()) return std::nullopt;
    for (std::size_t j = 0; j < lg.levels[i].size(); ++j)
      iso.map[lg.levels[i][j]] = lh.levels[i][j];
  }
  for (const auto& v : g.vertices) {
    const Vertex& w = h.at(iso.map.at(v.id));
    if (v.color != w.color) return std::nullopt;
    if (match_labels && v.label != w.label) return std::nullopt;
    const auto& go = g.out_of(v.id);
    const auto& ho = h.out_of(w.id);
    if (go.size() != ho.size()) return std::nullopt;
    for (std::size_t k = 0; k < go.size(); ++k)
      if (iso.map.at(go[k]) != ho[k]) return std::nullopt;
  }
  if (g.source_order.size() != h.source_order.size()) return std::nullopt;
  for (std::size_t k = 0; k < g.source_order.size(); ++k)
    if (iso.map.at(g.source_order[k]) != h.source_order[k]) return std::nullopt;
  return iso;
}

}  // namespace tc
