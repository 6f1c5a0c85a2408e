#include "jsonio.hpp"

#include <fstream>
#include <set>

namespace tc {

namespace {

const json& need(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw io_error(std::string("missing field \"") + key + "\"");
  return *it;
}

Color color_from(const std::string& s) {
  if (s == "blue") return Color::blue;
  if (s == "green") return Color::green;
  throw io_error("unknown color \"" + s + "\"");
}

// Sample any connection onto a grid for serialization.
ConnectionSpec::Sampled sampled_form(const ConnectionSpec& c, int nx = 33, int ny = 33) {
  ConnectionSpec::Sampled s;
  s.nx = nx;
  s.ny = ny;
  s.ax.resize(std::size_t(nx) * ny);
  s.ay.resize(std::size_t(nx) * ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      double x = c.chart.x0 + i * (c.chart.x1 - c.chart.x0) / (nx - 1);
      double y = c.chart.y0 + j * (c.chart.y1 - c.chart.y0) / (ny - 1);
      c.a_at(x, y, s.ax[j * nx + i], s.ay[j * nx + i]);
    }
  return s;
}

json rect_to_json(const Rect& r) { return json::array({r.x0, r.y0, r.x1, r.y1}); }

Rect rect_from_json(const json& j) {
  if (!j.is_array() || j.size() != 4) throw io_error("chart must be [x0,y0,x1,y1]");
  return {j[0], j[1], j[2], j[3]};
}

}  // namespace

json tag(json j, const std::string& kind) {
  j["schema"] = kSchema;
  j["kind"] = kind;
  return j;
}

json load_document(const std::string& path, const std::string& kind) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw io_error(path + ": " + e.what());
  }
  if (!j.is_object() || need(j, "schema") != kSchema)
    throw io_error(path + ": expected schema \"" + kSchema + "\"");
  if (!kind.empty() && need(j, "kind") != kind)
    throw io_error(path + ": expected kind \"" + kind + "\", got \"" +
                   need(j, "kind").get<std::string>() + "\"");
  return j;
}

json to_json(const Graph& g) {
  json vs = json::array(), es = json::array(), oo = json::object();
  for (const auto& v : g.vertices)
    vs.push_back({{"id", v.id}, {"label", v.label}, {"color", color_name(v.color)}});
  for (const auto& e : g.edges()) es.push_back({e.first, e.second});
  for (const auto& [u, ts] : g.out)
    if (!ts.empty()) oo[u] = ts;
  return tag({{"vertices", vs},
              {"edges", es},
              {"source_order", g.source_order},
              {"out_orders", oo}},
             "graph");
}

Graph graph_from_json(const json& j) {
  Graph g;
  for (const auto& v : need(j, "vertices")) {
    std::string id = need(v, "id");
    std::string label = v.value("label", id);
    g.add_vertex(id, label, color_from(v.value("color", "blue")));
  }
  for (const auto& e : need(j, "edges")) {
    if (!e.is_array() || e.size() != 2) throw io_error("edge must be [\"u\",\"v\"]");
    g.add_edge(e[0], e[1]);
  }
  if (j.contains("out_orders"))
    for (const auto& [u, ts] : j["out_orders"].items()) {
      std::vector<std::string> order = ts;
      auto& cur = g.out[u];
      if (std::set<std::string>(order.begin(), order.end()) !=
          std::set<std::string>(cur.begin(), cur.end()))
        throw io_error("out_orders for \"" + u + "\" does not list its out-edges");
      cur = order;
    }
  if (j.contains("source_order")) {
    g.source_order = j["source_order"].get<std::vector<std::string>>();
  } else {
    std::set<std::string> has_in;
    for (const auto& [u, ts] : g.out) has_in.insert(ts.begin(), ts.end());
    for (const auto& v : g.vertices)
      if (!has_in.count(v.id)) g.source_order.push_back(v.id);
  }
  return g;
}

json to_json(const Mat& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k)
      row.push_back({m(i, k).real(), m(i, k).imag()});
    rows.push_back(row);
  }
  return rows;
}

Mat mat_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw io_error("matrix must be a nonempty array of rows");
  Mat m(j.size(), j[0].size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || j[i].size() != std::size_t(m.cols()))
      throw io_error("ragged matrix rows");
    for (std::size_t k = 0; k < j[i].size(); ++k) {
      const json& c = j[i][k];
      if (c.is_number())
        m(i, k) = c.get<double>();
      else if (c.is_array() && c.size() == 2)
        m(i, k) = std::complex<double>(c[0], c[1]);
      else
        throw io_error("matrix entries must be numbers or [re, im]");
    }
  }
  return m;
}

json to_json(const CVec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back({v(i).real(), v(i).imag()});
  return a;
}

CVec cvec_from_json(const json& j) {
  Mat m = mat_from_json(json::array({j}));
  return m.row(0).transpose();
}

json to_json(const PathSpec& p) {
  json s = json::array();
  for (const auto& q : p.samples) s.push_back({q.x, q.y, q.t});
  return {{"samples", s}};
}

PathSpec path_from_json(const json& j) {
  PathSpec p;
  for (const auto& s : need(j, "samples")) {
    if (!s.is_array() || s.size() != 3) throw io_error("path sample must be [x,y,t]");
    p.samples.push_back({s[0], s[1], s[2]});
  }
  return p;
}

json to_json(const ConnectionSpec& c) {
  json j = tag({{"n", c.n}, {"chart", rect_to_json(c.chart)}}, "connection");
  if (const auto* k = std::get_if<ConnectionSpec::Constant>(&c.v)) {
    j["type"] = "constant";
    j["cx"] = to_json(k->cx);
    j["cy"] = to_json(k->cy);
  } else if (const auto* b = std::get_if<ConnectionSpec::Banded>(&c.v)) {
    j["type"] = "banded";
    json bands = json::array();
    for (const auto& m : b->cx) bands.push_back(to_json(m));
    j["bands"] = bands;
  } else if (const auto* g = std::get_if<ConnectionSpec::Glued>(&c.v)) {
    j["type"] = "glued";
    j["left"] = to_json(*g->left);
    j["right"] = to_json(*g->right);
    j["bump"] = {{"a", g->bump.a}, {"b", g->bump.b}};
    j["seam"] = g->seam;
  } else {
    // Sampled and pure-gauge connections serialize as their grids.
    ConnectionSpec::Sampled s = std::holds_alternative<ConnectionSpec::Sampled>(c.v)
                                    ? std::get<ConnectionSpec::Sampled>(c.v)
                                    : sampled_form(c);
    j["type"] = "sampled";
    j["nx"] = s.nx;
    j["ny"] = s.ny;
    json ax = json::array(), ay = json::array();
    for (const auto& m : s.ax) ax.push_back(to_json(m));
    for (const auto& m : s.ay) ay.push_back(to_json(m));
    j["ax"] = ax;
    j["ay"] = ay;
  }
  return j;
}

ConnectionSpec conn_from_json(const json& j) {
  ConnectionSpec c;
  c.n = need(j, "n");
  c.chart = rect_from_json(need(j, "chart"));
  std::string type = need(j, "type");
  if (type == "constant") {
    c.v = ConnectionSpec::Constant{mat_from_json(need(j, "cx")), mat_from_json(need(j, "cy"))};
  } else if (type == "banded") {
    ConnectionSpec::Banded b;
    for (const auto& m : need(j, "bands")) b.cx.push_back(mat_from_json(m));
    c.v = std::move(b);
  } else if (type == "glued") {
    ConnectionSpec::Glued g;
    g.left = std::make_shared<ConnectionSpec>(conn_from_json(need(j, "left")));
    g.right = std::make_shared<ConnectionSpec>(conn_from_json(need(j, "right")));
    g.bump = {need(j, "bump").value("a", 40.0), need(j, "bump").value("b", 0.0)};
    g.seam = need(j, "seam");
    c.v = std::move(g);
  } else if (type == "sampled") {
    ConnectionSpec::Sampled s;
    s.nx = need(j, "nx");
    s.ny = need(j, "ny");
    for (const auto& m : need(j, "ax")) s.ax.push_back(mat_from_json(m));
    for (const auto& m : need(j, "ay")) s.ay.push_back(mat_from_json(m));
    if (s.ax.size() != std::size_t(s.nx) * s.ny || s.ay.size() != s.ax.size())
      throw io_error("sampled grid size mismatch");
    c.v = std::move(s);
  } else {
    throw io_error("unknown connection type \"" + type + "\"");
  }
  return c;
}

json to_json(const TransportGraph& tg) {
  json r = json::array();
  for (const auto& [e, p] : tg.realization)
    r.push_back({{"edge", {e.first, e.second}}, {"path", to_json(p)}});
  json j = tag({{"graph", to_json(tg.graph)},
                {"realization", r},
                {"chart", rect_to_json(tg.chart)}},
               "transport_graph");
  if (tg.conn) j["connection"] = to_json(*tg.conn);
  return j;
}

TransportGraph transport_graph_from_json(const json& j) {
  TransportGraph tg;
  tg.graph = graph_from_json(need(j, "graph"));
  tg.chart = rect_from_json(need(j, "chart"));
  for (const auto& r : need(j, "realization")) {
    const json& e = need(r, "edge");
    tg.realization[{e[0], e[1]}] = path_from_json(need(r, "path"));
  }
  if (j.contains("connection")) tg.conn = conn_from_json(j["connection"]);
  return tg;
}

json to_json(const Multitangle& m) {
  json s = json::array();
  for (const auto& t : m.summands) s.push_back(to_json(t));
  return tag({{"source_arity", m.source_arity},
              {"target_arity", m.target_arity},
              {"summands", s}},
             "multitangle");
}

Multitangle multitangle_from_json(const json& j) {
  Multitangle m;
  m.source_arity = need(j, "source_arity");
  m.target_arity = need(j, "target_arity");
  for (const auto& s : need(j, "summands"))
    m.summands.push_back(transport_graph_from_json(s));
  return m;
}

json to_json(const AlgebraSpec& a) {
  json els = json::object();
  for (const auto& [e, v] : a.elements) els[e] = to_json(v);
  return tag({{"n", a.n},
              {"mult", to_json(a.mult)},
              {"comult", to_json(a.comult)},
              {"unit", to_json(CVec(a.unit))},
              {"trace", to_json(a.trace_functional)},
              {"elements", els}},
             "algebra");
}

AlgebraSpec algebra_from_json(const json& j) {
  AlgebraSpec a;
  if (j.contains("preset")) {
    std::string p = j["preset"];
    if (p == "matrix")
      a = matrix_algebra(need(j, "k"));
    else if (p == "diagonal")
      a = diagonal_algebra(need(j, "n"));
    else if (p == "qubit")
      a = qubit_algebra();
    else
      throw io_error("unknown algebra preset \"" + p + "\"");
  } else {
    a.n = need(j, "n");
    a.mult = mat_from_json(need(j, "mult"));
    a.comult = j.contains("comult") ? mat_from_json(j["comult"]) : Mat(a.mult.adjoint());
    a.unit = cvec_from_json(need(j, "unit"));
    a.trace_functional = mat_from_json(need(j, "trace"));
  }
  if (j.contains("elements"))
    for (const auto& [e, v] : j["elements"].items()) a.elements[e] = cvec_from_json(v);
  return a;
}

json to_json(const Circuit& c) {
  json layers = json::array();
  for (const auto& l : c.layers) {
    json layer = json::array();
    for (const auto& app : l) layer.push_back({{"gate", app.gate}, {"wires", app.wires}});
    layers.push_back(layer);
  }
  return tag({{"qubits", c.qubits}, {"layers", layers}}, "circuit");
}

Circuit circuit_from_json(const json& j) {
  Circuit c;
  c.qubits = need(j, "qubits");
  for (const auto& l : need(j, "layers")) {
    std::vector<GateApp> layer;
    for (const auto& app : l)
      layer.push_back({need(app, "gate"), need(app, "wires").get<std::vector<int>>()});
    c.layers.push_back(std::move(layer));
  }
  return c;
}

json expr_to_json(const ExprPtr& e) {
  if (!e) throw io_error("null expression");
  static const char* names[] = {"gen", "id", "compose", "tensor", "mult", "comult", "twist"};
  json j = {{"kind", names[static_cast<int>(e->kind)]}};
  if (e->kind == Expr::Kind::gen || e->kind == Expr::Kind::id) {
    j["src"] = {{"label", e->src.label}, {"color", color_name(e->src.color)}};
    j["dst"] = {{"label", e->dst.label}, {"color", color_name(e->dst.color)}};
    if (e->orig_edge) j["edge"] = {e->orig_edge->first, e->orig_edge->second};
  } else {
    json kids = json::array();
    for (const auto& c : e->children) kids.push_back(expr_to_json(c));
    j["children"] = kids;
  }
  return j;
}

}  // namespace tc
