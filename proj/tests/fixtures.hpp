#pragma once
#include <random>
#include <set>

#include "composition.hpp"
#include "graph.hpp"

namespace fixtures {

using namespace tc;

// Nine-vertex worked example: edges
// (1,3),(1,4),(2,3),(3,5),(3,6),(4,7),(5,8),(6,9),(7,9).
inline Graph nine_vertex() {
  std::vector<Vertex> vs;
  for (int i = 1; i <= 9; ++i) vs.push_back({std::to_string(i), std::to_string(i), Color::blue});
  return make_graph(vs, {{"1", "3"}, {"1", "4"}, {"2", "3"}, {"3", "5"},
                         {"3", "6"}, {"4", "7"}, {"5", "8"}, {"6", "9"}, {"7", "9"}});
}

// Random valid DAG: random topological order, forward edges only, random
// out-edge orders, occasional shared labels and green endpoints.
inline Graph random_graph(std::mt19937& rng, int max_vertices = 20,
                          double edge_prob = 0.25, bool allow_green = false) {
  std::uniform_int_distribution<int> nv(1, max_vertices);
  int n = nv(rng);
  std::vector<Vertex> vs;
  std::uniform_int_distribution<int> lbl(0, std::max(2, n / 2));
  std::uniform_int_distribution<int> coin(0, 9);
  for (int i = 0; i < n; ++i) {
    Color c = allow_green && coin(rng) == 0 ? Color::green : Color::blue;
    vs.push_back({"v" + std::to_string(i), "L" + std::to_string(lbl(rng)), c});
  }
  std::vector<Edge> es;
  std::bernoulli_distribution has_edge(edge_prob);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (has_edge(rng)) es.emplace_back(vs[i].id, vs[j].id);
  // Shuffle per-vertex out orders and the source order for coverage.
  Graph g = make_graph(vs, es);
  for (auto& [u, ts] : g.out) std::shuffle(ts.begin(), ts.end(), rng);
  std::shuffle(g.source_order.begin(), g.source_order.end(), rng);
  return g;
}

// Random DAG with exactly `nsrc` sources (all blue): every later vertex gets
// at least one incoming edge from an earlier vertex.
inline Graph random_graph_sources(std::mt19937& rng, int nsrc, int extra,
                                  const std::string& prefix = "u") {
  std::vector<Vertex> vs;
  std::uniform_int_distribution<int> lbl(0, std::max(2, (nsrc + extra) / 2));
  for (int i = 0; i < nsrc + extra; ++i)
    vs.push_back({prefix + std::to_string(i), "L" + std::to_string(lbl(rng)), Color::blue});
  std::vector<Edge> es;
  std::bernoulli_distribution more(0.2);
  for (int j = nsrc; j < nsrc + extra; ++j) {
    std::uniform_int_distribution<int> pick(0, j - 1);
    std::set<int> ins = {pick(rng)};
    while (more(rng)) ins.insert(pick(rng));
    for (int i : ins) es.emplace_back(vs[i].id, vs[j].id);
  }
  Graph g = make_graph(vs, es);
  for (auto& [u, ts] : g.out) std::shuffle(ts.begin(), ts.end(), rng);
  std::shuffle(g.source_order.begin(), g.source_order.end(), rng);
  return g;
}

// Straight-line realization: vertices on a level grid inside the chart,
// one line path per edge.
inline TransportGraph realize(const Graph& g, Rect chart = {0, 0, 1, 1}) {
  TransportGraph tg;
  tg.graph = g;
  tg.chart = chart;
  LevelOrdering lo = level_order(g);
  std::map<std::string, std::pair<double, double>> pos;
  double nl = double(lo.levels.size());
  for (std::size_t l = 0; l < lo.levels.size(); ++l)
    for (std::size_t p = 0; p < lo.levels[l].size(); ++p) {
      // Inset from the x-extremes so paths never sit exactly on a gluing seam.
      double fx = nl <= 1 ? 0.5 : 0.02 + 0.96 * l / (nl - 1);
      double x = chart.x0 + fx * (chart.x1 - chart.x0);
      double y = chart.y0 + (p + 0.5) / lo.levels[l].size() * (chart.y1 - chart.y0);
      pos[lo.levels[l][p]] = {x, y};
    }
  for (const auto& e : g.edges())
    tg.realization[e] = line_path(pos[e.first].first, pos[e.first].second,
                                  pos[e.second].first, pos[e.second].second);
  return tg;
}

}  // namespace fixtures
