#include <doctest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "reduction.hpp"

using namespace tc;
using fixtures::nine_vertex;

namespace {

std::vector<std::vector<std::string>> level_labels(const Graph& g) {
  LevelOrdering lo = level_order(g);
  std::vector<std::vector<std::string>> out;
  for (const auto& lvl : lo.levels) {
    std::vector<std::string> row;
    for (const auto& id : lvl) row.push_back(g.at(id).label);
    out.push_back(row);
  }
  return out;
}

}  // namespace

TEST_SUITE_BEGIN("reduction");

TEST_CASE("fan-in splits into a left-nested chain of binary merges") {
  Graph g = make_graph({{"u1", "u1", Color::blue},
                        {"u2", "u2", Color::blue},
                        {"u3", "u3", Color::blue},
                        {"v", "v", Color::blue}},
                       {{"u1", "v"}, {"u2", "v"}, {"u3", "v"}});
  Graph r = split_fan_in(g);
  REQUIRE(r.vertices.size() == 5);  // one inserted copy of v
  // The copy merges u1,u2 and feeds v together with u3.
  std::string copy;
  for (const auto& v : r.vertices)
    if (v.id != "v" && v.label == "v") copy = v.id;
  REQUIRE(!copy.empty());
  CHECK(r.out_of("u1") == std::vector<std::string>{copy});
  CHECK(r.out_of("u2") == std::vector<std::string>{copy});
  CHECK(r.out_of("u3") == std::vector<std::string>{"v"});
  CHECK(r.out_of(copy) == std::vector<std::string>{"v"});
}

TEST_CASE("fan-out splits dually; k targets need k-2 copies") {
  Graph g = make_graph({{"v", "v", Color::blue},
                        {"w1", "w1", Color::blue},
                        {"w2", "w2", Color::blue},
                        {"w3", "w3", Color::blue},
                        {"w4", "w4", Color::blue}},
                       {{"v", "w1"}, {"v", "w2"}, {"v", "w3"}, {"v", "w4"}});
  Graph r = split_fan_out(g);
  CHECK(r.vertices.size() == 7);  // two inserted copies of v
  int copies = 0;
  for (const auto& x : r.vertices)
    if (x.id != "v" && x.label == "v") ++copies;
  CHECK(copies == 2);
  // v keeps its last target directly; every vertex has outdegree <= 2.
  CHECK(r.out_of("v").back() == "w4");
  for (const auto& x : r.vertices) CHECK(r.out_of(x.id).size() <= 2);
}

TEST_CASE("shared-edge patterns are eliminated") {
  // Mixed pattern {(u,v),(u,x),(w,x)} with shared edge (u,x).
  Graph a = make_graph({{"u", "u", Color::blue}, {"w", "w", Color::blue},
                        {"v", "v", Color::blue}, {"x", "x", Color::blue}},
                       {{"u", "v"}, {"u", "x"}, {"w", "x"}});
  Graph ra = separate_shared(a);
  CHECK(ra.vertices.size() == 7);
  for (const auto& e : ra.edges()) {
    std::size_t outd = ra.out_of(e.first).size();
    std::size_t ind = ra.in_of(e.second).size();
    CHECK(!(outd == 2 && ind == 2));
  }

  // Triangle {(u,v),(v,w),(u,w)} becomes a diamond with one copy of w.
  Graph b = make_graph({{"u", "u", Color::blue}, {"v", "v", Color::blue},
                        {"w", "w", Color::blue}},
                       {{"u", "v"}, {"u", "w"}, {"v", "w"}});
  Graph rb = separate_shared(b);
  CHECK(rb.vertices.size() == 4);
  CHECK(rb.edges().size() == 4);

  // Pattern-free graph unchanged.
  Graph c = nine_vertex();
  Graph rc = split_fan_in(c);
  CHECK(rc.vertices.size() == 9);
}

TEST_CASE("level-skipping edge gets one copy per skipped level") {
  Graph g = make_graph({{"a", "a", Color::blue}, {"b", "b", Color::blue},
                        {"c", "c", Color::blue}, {"d", "d", Color::blue}},
                       {{"a", "b"}, {"b", "c"}, {"a", "d"}, {"d", "c"}, {"a", "c"}});
  // (a,c) skips from level 1 to level 3.
  Graph r = normalize_levels(g);
  CHECK(r.vertices.size() == 5);
  LevelOrdering lo = level_order(r);
  for (const auto& e : r.edges()) CHECK(lo.level_of(e.second) - lo.level_of(e.first) == 1);
}

TEST_CASE("worked example reduces to the 15-vertex six-level graph") {
  ReducedGraph r = reduce(nine_vertex());
  CHECK(is_reduced(r.graph));
  CHECK(r.graph.vertices.size() == 15);
  auto cols = level_labels(r.graph);
  REQUIRE(cols.size() == 6);
  CHECK(cols[0] == std::vector<std::string>{"1", "2"});
  CHECK(cols[1] == std::vector<std::string>{"3", "4", "2"});
  // Copies of 3, 4 and a second copy of 3 carry the crossing level.
  std::vector<std::string> mid = cols[2];
  std::sort(mid.begin(), mid.end());
  CHECK(mid == std::vector<std::string>{"3", "3", "4"});
  CHECK(cols[3] == std::vector<std::string>{"3", "4"});
  CHECK(cols[4] == std::vector<std::string>{"5", "6", "7"});
  CHECK(cols[5] == std::vector<std::string>{"8", "9"});
  // Each original edge appears exactly once as a generator.
  CHECK(r.edge_origin.size() == 9);
}

TEST_CASE("post-gluing reduction inserts identity chains for early targets") {
  // Glued shape: (1,3),(3,6),(2,7),(2,8) — 7 and 8 stop one level early.
  Graph g = make_graph({{"1", "1", Color::blue}, {"2", "2", Color::blue},
                        {"3", "3", Color::blue}, {"6", "6", Color::blue},
                        {"7", "7", Color::blue}, {"8", "8", Color::blue}},
                       {{"1", "3"}, {"3", "6"}, {"2", "7"}, {"2", "8"}});
  ReducedGraph r = reduce(g);
  CHECK(is_reduced(r.graph));
  CHECK(r.graph.vertices.size() == 8);  // copies 7', 8'
  auto cols = level_labels(r.graph);
  REQUIRE(cols.size() == 3);
  CHECK(cols[2] == std::vector<std::string>{"6", "7", "8"});
}

TEST_CASE("is_reduced rejects violations") {
  Graph fan = make_graph({{"a", "a", Color::blue}, {"b", "b", Color::blue},
                          {"c", "c", Color::blue}, {"d", "d", Color::blue},
                          {"v", "v", Color::blue}},
                         {{"a", "v"}, {"b", "v"}, {"c", "v"}, {"d", "v"}});
  CHECK(!is_reduced(fan));
  Graph skip = make_graph({{"a", "a", Color::blue}, {"b", "b", Color::blue},
                           {"c", "c", Color::blue}},
                          {{"a", "b"}, {"b", "c"}, {"a", "c"}});
  CHECK(!is_reduced(skip));
  CHECK(is_reduced(nine_vertex()) == false);  // (1,3) shared edge
}

TEST_CASE("random graphs: invariants, boundary preservation, idempotence") {
  std::mt19937 rng(23);
  for (int i = 0; i < 60; ++i) {
    Graph g = fixtures::random_graph(rng, 14);
    ReducedGraph r = reduce(g);
    CHECK(is_reduced(r.graph));

    Boundary sg = sources(g), sr = sources(r.graph);
    REQUIRE(sg.slots.size() == sr.slots.size());
    for (std::size_t k = 0; k < sg.slots.size(); ++k)
      CHECK(sg.slots[k].id == sr.slots[k].id);

    Boundary tg = targets(g), tr = targets(r.graph);
    REQUIRE(tg.slots.size() == tr.slots.size());
    for (std::size_t k = 0; k < tg.slots.size(); ++k) {
      CHECK(tg.slots[k].color == tr.slots[k].color);
      CHECK(tg.slots[k].id == r.vertex_origin.at(tr.slots[k].id));
    }

    ReducedGraph r2 = reduce(r.graph);
    CHECK(find_expression_iso(r.graph, r2.graph, true).has_value());

    // Generators biject with original edges.
    CHECK(r.edge_origin.size() == g.edges().size());
  }
}

TEST_SUITE_END();
