#include "composition.hpp"

#include <algorithm>
#include <set>

namespace tc {
namespace {

std::string freshen(std::set<std::string>& taken, const std::string& want) {
  std::string id = want;
  int n = 1;
  while (!taken.insert(id).second) id = want + "'" + std::to_string(n++);
  return id;
}

struct GlueMatch {
  std::vector<std::pair<std::string, std::string>> pairs;  // h source -> g target
  std::vector<std::string> unglued_h_sources;              // in S(h) order
};

[[noreturn]] void not_gluable(const Boundary& sh, const Boundary& tg) {
  std::size_t k = std::min(sh.slots.size(), tg.slots.size());
  for (std::size_t i = 0; i < k; ++i)
    if (sh.slots[i].color != tg.slots[i].color)
      throw err("NotGluable", "slot " + std::to_string(i) + ": source is " +
                                  color_name(sh.slots[i].color) + ", target is " +
                                  color_name(tg.slots[i].color));
  throw err("NotGluable", "boundary sizes differ: " + std::to_string(sh.slots.size()) +
                              " sources vs " + std::to_string(tg.slots.size()) + " targets");
}

// The pretransport gluing cases: equal color sequences glue pairwise; else
// equal blue counts glue the blue slots in order (green slots face the empty
// manifold and stay unglued); anything else is not gluable.
GlueMatch match_boundaries(const Boundary& sh, const Boundary& tg) {
  GlueMatch m;
  bool same_colors = sh.slots.size() == tg.slots.size();
  for (std::size_t i = 0; same_colors && i < sh.slots.size(); ++i)
    same_colors = sh.slots[i].color == tg.slots[i].color;
  if (same_colors) {
    for (std::size_t i = 0; i < sh.slots.size(); ++i)
      m.pairs.emplace_back(sh.slots[i].id, tg.slots[i].id);
    return m;
  }
  if (sh.blue_count() == tg.blue_count()) {
    std::vector<std::string> gb;
    for (const auto& s : tg.slots)
      if (s.color == Color::blue) gb.push_back(s.id);
    std::size_t k = 0;
    for (const auto& s : sh.slots) {
      if (s.color == Color::blue)
        m.pairs.emplace_back(s.id, gb[k++]);
      else
        m.unglued_h_sources.push_back(s.id);
    }
    return m;
  }
  not_gluable(sh, tg);
}

// Pushout of h onto g: glued h sources become g vertices, the rest of h is
// copied with fresh ids. Returns the glued graph (source order set by the
// caller) and the h-vertex mapping.
std::pair<Graph, std::map<std::string, std::string>> pushout(const Graph& h, const Graph& g,
                                                             const GlueMatch& m) {
  Graph r = g;
  std::set<std::string> taken;
  for (const auto& v : g.vertices) taken.insert(v.id);
  std::map<std::string, std::string> hmap;
  for (const auto& [hs, gt] : m.pairs) hmap[hs] = gt;
  for (const auto& v : h.vertices) {
    if (hmap.count(v.id)) continue;
    std::string id = freshen(taken, v.id);
    hmap[v.id] = id;
    r.add_vertex(id, v.label, v.color);
  }
  for (const auto& v : h.vertices)
    for (const auto& t : h.out_of(v.id)) r.add_edge(hmap.at(v.id), hmap.at(t));
  return {std::move(r), std::move(hmap)};
}

std::pair<Graph, std::map<std::string, std::string>> glue_impl(const Graph& h,
                                                               const Graph& g) {
  validate(g);
  validate(h);
  GlueMatch m = match_boundaries(sources(h), targets(g));
  auto [r, hmap] = pushout(h, g, m);
  r.source_order = g.source_order;
  for (const auto& s : m.unglued_h_sources) r.source_order.push_back(hmap.at(s));
  validate(r);
  return {std::move(r), std::move(hmap)};
}

ConnectionSpec conn_or_zero(const TransportGraph& tg, int n) {
  return tg.conn ? *tg.conn : zero_connection(n, tg.chart);
}

// Side-by-side connection: left of the seam sees `left`, right sees `right`
// (exact selection, no collar mixing — the charts are disjoint).
ConnectionSpec piecewise_connection(const ConnectionSpec& left, const ConnectionSpec& right,
                                    double seam, Rect chart) {
  ConnectionSpec out;
  out.chart = chart;
  out.n = left.n;
  ConnectionSpec::Sampled s;
  s.nx = s.ny = 33;
  ConnectionSpec l = left, r = right;
  s.exact = [l, r, seam](double x, double y, Mat& ax, Mat& ay) {
    const ConnectionSpec& side = x <= seam ? l : r;
    double cx = std::clamp(x, side.chart.x0, side.chart.x1);
    double cy = std::clamp(y, side.chart.y0, side.chart.y1);
    side.a_at(cx, cy, ax, ay);
  };
  s.ax.resize(std::size_t(s.nx) * s.ny);
  s.ay.resize(std::size_t(s.nx) * s.ny);
  for (int j = 0; j < s.ny; ++j)
    for (int i = 0; i < s.nx; ++i) {
      double x = chart.x0 + i * (chart.x1 - chart.x0) / (s.nx - 1);
      double y = chart.y0 + j * (chart.y1 - chart.y0) / (s.ny - 1);
      s.exact(x, y, s.ax[j * s.nx + i], s.ay[j * s.nx + i]);
    }
  out.v = std::move(s);
  return out;
}

// Places h's chart to the right of g's (aligning the bottom edges) and maps
// h's realization across; shared by gluing and disjoint union.
struct SideBySide {
  double dx, dy, seam;
  Rect chart;
};

SideBySide lay_out(const TransportGraph& g, const TransportGraph& h) {
  SideBySide s;
  s.dx = g.chart.x1 - h.chart.x0;
  s.dy = g.chart.y0 - h.chart.y0;
  s.seam = g.chart.x1;
  s.chart = {g.chart.x0, std::min(g.chart.y0, h.chart.y0 + s.dy), h.chart.x1 + s.dx,
             std::max(g.chart.y1, h.chart.y1 + s.dy)};
  return s;
}

}  // namespace

void validate_transport_graph(const TransportGraph& tg) {
  validate(tg.graph);
  for (const auto& e : tg.graph.edges()) {
    auto it = tg.realization.find(e);
    if (it == tg.realization.end())
      throw err("MissingAssignment", "edge " + edge_str(e) + " has no path");
    validate_path(it->second);
    for (const auto& s : it->second.samples)
      if (!tg.chart.contains(s.x, s.y))
        throw err("PathOutsideChart", "path of " + edge_str(e) + " leaves the chart");
  }
}

Graph disjoint_union(const Graph& g, const Graph& h) {
  validate(g);
  validate(h);
  Graph r = g;
  std::set<std::string> taken;
  for (const auto& v : g.vertices) taken.insert(v.id);
  std::map<std::string, std::string> hmap;
  for (const auto& v : h.vertices) {
    hmap[v.id] = freshen(taken, v.id);
    r.add_vertex(hmap[v.id], v.label, v.color);
  }
  for (const auto& v : h.vertices)
    for (const auto& t : h.out_of(v.id)) r.add_edge(hmap.at(v.id), hmap.at(t));
  for (const auto& s : h.source_order) r.source_order.push_back(hmap.at(s));
  return r;
}

TransportGraph disjoint_union(const TransportGraph& g, const TransportGraph& h) {
  SideBySide lay = lay_out(g, h);
  TransportGraph out;
  // Rebuild the union to know h's vertex renaming.
  Graph r = g.graph;
  std::set<std::string> taken;
  for (const auto& v : g.graph.vertices) taken.insert(v.id);
  std::map<std::string, std::string> hmap;
  for (const auto& v : h.graph.vertices) {
    hmap[v.id] = freshen(taken, v.id);
    r.add_vertex(hmap[v.id], v.label, v.color);
  }
  for (const auto& v : h.graph.vertices)
    for (const auto& t : h.graph.out_of(v.id)) r.add_edge(hmap.at(v.id), hmap.at(t));
  for (const auto& s : h.graph.source_order) r.source_order.push_back(hmap.at(s));
  out.graph = std::move(r);
  out.chart = lay.chart;
  out.realization = g.realization;
  for (const auto& [e, p] : h.realization)
    out.realization[{hmap.at(e.first), hmap.at(e.second)}] = shift_path(p, lay.dx, lay.dy);
  if (g.conn || h.conn) {
    int n = g.conn ? g.conn->n : h.conn->n;
    out.conn = piecewise_connection(conn_or_zero(g, n),
                                    shift_connection(conn_or_zero(h, n), lay.dx, lay.dy),
                                    lay.seam, lay.chart);
  }
  return out;
}

Graph boundary_graph(const Boundary& b) {
  Graph g;
  for (const auto& s : b.slots) {
    g.add_vertex(s.id, s.id, s.color);
    g.source_order.push_back(s.id);
  }
  return g;
}

bool gluable(const Graph& h, const Graph& g) {
  try {
    match_boundaries(sources(h), targets(g));
    return true;
  } catch (const domain_error&) {
    return false;
  }
}

Graph glue(const Graph& h, const Graph& g) { return glue_impl(h, g).first; }

TransportGraph glue(const TransportGraph& h, const TransportGraph& g) {
  auto [r, hmap] = glue_impl(h.graph, g.graph);
  SideBySide lay = lay_out(g, h);
  TransportGraph out;
  out.graph = std::move(r);
  out.chart = lay.chart;
  out.realization = g.realization;
  for (const auto& [e, p] : h.realization)
    out.realization[{hmap.at(e.first), hmap.at(e.second)}] = shift_path(p, lay.dx, lay.dy);
  if (g.conn || h.conn) {
    int n = g.conn ? g.conn->n : h.conn->n;
    out.conn = glue_connections(shift_connection(conn_or_zero(h, n), lay.dx, lay.dy),
                                conn_or_zero(g, n), {}, lay.seam);
  }
  return out;
}

Graph glue_at(const Graph& h, const Graph& g, std::size_t begin, std::size_t count) {
  validate(g);
  validate(h);
  Boundary sb = sources(h), tb = targets(g);
  if (begin + count > sb.slots.size())
    throw err("SegmentOutOfRange", "segment [" + std::to_string(begin) + "," +
                                       std::to_string(begin + count) + ") exceeds " +
                                       std::to_string(sb.slots.size()) + " sources");
  // An empty segment glues nothing: the result is a disjoint union with g's
  // sources spliced in at `begin`.
  if (count != 0 && count != tb.slots.size())
    throw err("NotGluable", "segment length " + std::to_string(count) + " vs " +
                                std::to_string(tb.slots.size()) + " targets");
  GlueMatch m;
  for (std::size_t i = 0; i < count; ++i) {
    if (sb.slots[begin + i].color != tb.slots[i].color)
      throw err("NotGluable", "slot " + std::to_string(begin + i) + ": source is " +
                                  color_name(sb.slots[begin + i].color) + ", target is " +
                                  color_name(tb.slots[i].color));
    m.pairs.emplace_back(sb.slots[begin + i].id, tb.slots[i].id);
  }
  auto [r, hmap] = pushout(h, g, m);
  r.source_order.clear();
  for (std::size_t i = 0; i < begin; ++i) r.source_order.push_back(hmap.at(sb.slots[i].id));
  for (const auto& s : g.source_order) r.source_order.push_back(s);
  for (std::size_t i = begin + count; i < sb.slots.size(); ++i)
    r.source_order.push_back(hmap.at(sb.slots[i].id));
  validate(r);
  return r;
}

Multitangle make_multitangle(std::vector<TransportGraph> summands) {
  Multitangle m;
  m.summands = std::move(summands);
  for (const auto& s : m.summands) {
    m.source_arity = std::max(m.source_arity, sources(s.graph).blue_count());
    m.target_arity = std::max(m.target_arity, targets(s.graph).blue_count());
  }
  return m;
}

Multitangle empty_multitangle(std::size_t source_arity, std::size_t target_arity) {
  Multitangle m;
  m.source_arity = source_arity;
  m.target_arity = target_arity;
  return m;
}

Multitangle add(const Multitangle& m, const Multitangle& n) {
  Multitangle r;
  r.summands = m.summands;
  r.summands.insert(r.summands.end(), n.summands.begin(), n.summands.end());
  r.source_arity = std::max(m.source_arity, n.source_arity);
  r.target_arity = std::max(m.target_arity, n.target_arity);
  return r;
}

TransportGraph identity_cylinder(int wires, const std::string& id_prefix) {
  TransportGraph tg;
  tg.chart = {0, 0, 1, double(std::max(1, wires))};
  for (int i = 0; i < wires; ++i) {
    std::string s = id_prefix + std::to_string(i), t = s + ".t";
    tg.graph.add_vertex(s, s, Color::blue);
    tg.graph.add_vertex(t, s, Color::blue);
    tg.graph.add_edge(s, t);
    tg.graph.source_order.push_back(s);
    tg.realization[{s, t}] = line_path(0, i + 0.5, 1, i + 0.5);
  }
  return tg;
}

Multitangle compose_multitangles(const Multitangle& n, const Multitangle& m) {
  std::size_t iface = std::max(m.target_arity, n.source_arity);
  std::vector<TransportGraph> out;
  for (std::size_t i = 0; i < m.summands.size(); ++i) {
    for (std::size_t j = 0; j < n.summands.size(); ++j) {
      TransportGraph mi = m.summands[i];
      std::size_t mt = targets(mi.graph).blue_count();
      if (mt < iface)
        mi = disjoint_union(mi, identity_cylinder(int(iface - mt), "padm" + std::to_string(i)));
      TransportGraph nj = n.summands[j];
      std::size_t ns = sources(nj.graph).blue_count();
      if (ns < iface)
        nj = disjoint_union(nj, identity_cylinder(int(iface - ns), "padn" + std::to_string(j)));
      out.push_back(glue(nj, mi));
    }
  }
  if (out.empty()) return empty_multitangle(m.source_arity, n.target_arity);
  return make_multitangle(std::move(out));
}

}  // namespace tc
