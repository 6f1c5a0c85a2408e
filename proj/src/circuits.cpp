#include "circuits.hpp"

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace tc {

namespace {

// Trapezoid plateau over a unit span: zero within 0.2 of either end, ramps on
// [0.2, 0.35] and [0.65, 0.8]. Kinks sit on multiples of 1/1000 so the RK4
// grid never straddles one.
double profile(double s) {
  if (s <= 0.2 || s >= 0.8) return 0.0;
  if (s < 0.35) return (s - 0.2) / 0.15;
  if (s <= 0.65) return 1.0;
  return (0.8 - s) / 0.15;
}

constexpr double kMass = 0.45;       // plateau 0.3 + two half-ramps
constexpr double kHalfMass = 0.225;  // symmetric about s = 1/2

Mat mlog(const Mat& u) {
  Mat l = u.log();
  if (!l.allFinite() || (l.exp() - u).norm() > 1e-8 * std::max(1.0, u.norm()))
    throw err("LogBranchFailure", "principal logarithm failed");
  return l;
}

// Profiled connection whose full-span transport is exactly u.
ConnectionSpec gate_connection(const Mat& u, Rect chart) {
  return profiled_banded({Mat(-mlog(u) / kMass)}, chart);
}

TransportGraph gate_cylinder(const Mat& u, const std::string& prefix) {
  TransportGraph tg = identity_cylinder(1, prefix);
  tg.conn = gate_connection(u, tg.chart);
  return tg;
}

// Projector-wire transport: an invertible A with [1,1]*A = e_i^T (the cap
// reads off the i-th coordinate through the trace) and A*[1,1]^T = e_i (the
// cup turns the unit into the i-th basis vector).
Mat projector_core(int i) {
  Mat a(2, 2);
  if (i == 0)
    a << 2, -1, -1, 1;
  else
    a << 1, -1, -1, 2;
  return a;
}

// Summand P_i (x) u: a blue-green-blue projector wire over the target wire.
TransportGraph projector_summand(int i, const Mat& u, const std::string& prefix) {
  TransportGraph tg;
  Graph g;
  g.add_vertex(prefix + "c", "q0", Color::blue);
  g.add_vertex(prefix + "t", "q1", Color::blue);
  g.add_vertex(prefix + "m", prefix + "m", Color::green);
  g.add_vertex(prefix + "c.t", "q0", Color::blue);
  g.add_vertex(prefix + "t.t", "q1", Color::blue);
  g.add_edge(prefix + "c", prefix + "m");
  g.add_edge(prefix + "m", prefix + "c.t");
  g.add_edge(prefix + "t", prefix + "t.t");
  g.source_order = {prefix + "c", prefix + "t"};
  tg.graph = std::move(g);
  tg.chart = {0, 0, 1, 2};
  tg.realization[{prefix + "c", prefix + "m"}] = line_path(0, 0.5, 0.5, 0.5);
  tg.realization[{prefix + "m", prefix + "c.t"}] = line_path(0.5, 0.5, 1, 0.5);
  tg.realization[{prefix + "t", prefix + "t.t"}] = line_path(0, 1.5, 1, 1.5);
  Mat cb = -mlog(projector_core(i)) / kHalfMass;
  tg.conn = profiled_banded({cb, Mat(-mlog(u) / kMass)}, tg.chart);
  return tg;
}

Gate controlled(const std::string& name, const Mat& u) {
  Gate g;
  g.name = name;
  g.arity = 2;
  g.unitary = Mat::Identity(4, 4);
  g.unitary.bottomRightCorner(2, 2) = u;
  g.tangle = make_multitangle({projector_summand(0, Mat(Mat::Identity(2, 2)), name + "0"),
                               projector_summand(1, u, name + "1")});
  return g;
}

Gate single(const std::string& name, const Mat& u) {
  Gate g;
  g.name = name;
  g.arity = 1;
  g.unitary = u;
  g.tangle = make_multitangle({gate_cylinder(u, name)});
  return g;
}

std::map<std::string, Gate> build_gates() {
  using namespace std::complex_literals;
  std::map<std::string, Gate> lib;
  Mat x(2, 2), y(2, 2), z(2, 2), h(2, 2), s(2, 2), t(2, 2);
  x << 0, 1, 1, 0;
  y << 0, -1i, 1i, 0;
  z << 1, 0, 0, -1;
  h << 1, 1, 1, -1;
  h /= std::sqrt(2.0);
  s << 1, 0, 0, 1i;
  t << 1, 0, 0, std::exp(0.25i * std::acos(-1.0));
  for (auto& [n, u] : std::vector<std::pair<std::string, Mat>>{
           {"X", x}, {"Y", y}, {"Z", z}, {"H", h}, {"S", s}, {"T", t}})
    lib.emplace(n, single(n, u));
  lib.emplace("CNOT", controlled("CNOT", x));
  lib.emplace("CZ", controlled("CZ", z));
  return lib;
}

Multitangle identity_multitangle(int wires, const std::string& prefix) {
  return make_multitangle({identity_cylinder(wires, prefix)});
}

}  // namespace

double profile_mass() { return kMass; }
double profile_half_mass() { return kHalfMass; }

ConnectionSpec profiled_banded(const std::vector<Mat>& cx, Rect chart) {
  if (cx.empty()) throw err("SingularInterpolation", "profiled connection needs bands");
  ConnectionSpec out;
  out.chart = chart;
  out.n = static_cast<int>(cx[0].rows());
  ConnectionSpec::Sampled s;
  s.nx = s.ny = 33;
  std::vector<Mat> bands = cx;
  Rect ch = chart;
  s.exact = [bands, ch](double x, double y, Mat& ax, Mat& ay) {
    auto k = std::min<std::size_t>(bands.size() - 1,
                                   std::size_t(std::max(0.0, y - ch.y0)));
    ax = profile((x - ch.x0) / (ch.x1 - ch.x0)) * bands[k];
    ay = Mat::Zero(bands[k].rows(), bands[k].cols());
  };
  s.ax.resize(std::size_t(s.nx) * s.ny);
  s.ay.resize(std::size_t(s.nx) * s.ny);
  for (int j = 0; j < s.ny; ++j)
    for (int i = 0; i < s.nx; ++i) {
      double px = chart.x0 + i * (chart.x1 - chart.x0) / (s.nx - 1);
      double py = chart.y0 + j * (chart.y1 - chart.y0) / (s.ny - 1);
      s.exact(px, py, s.ax[j * s.nx + i], s.ay[j * s.nx + i]);
    }
  out.v = std::move(s);
  return out;
}

const std::map<std::string, Gate>& standard_gates() {
  static const std::map<std::string, Gate> lib = build_gates();
  return lib;
}

Register make_register(const std::vector<int>& kets) {
  Register r;
  r.kets = kets;
  TransportGraph acc;
  acc.chart = {0, 0, 0, 1};  // empty; widens as qubits are appended
  bool first = true;
  for (std::size_t k = 0; k < kets.size(); ++k) {
    if (kets[k] != 0 && kets[k] != 1)
      throw err("ArityMismatch", "register kets must be 0 or 1");
    std::string tag = "k" + std::to_string(k);
    TransportGraph el;
    el.graph.add_vertex(tag, tag, Color::green);
    el.graph.add_vertex(tag + ".t", "q", Color::blue);
    el.graph.add_edge(tag, tag + ".t");
    el.graph.source_order = {tag};
    el.chart = {0, 0, 1, 1};
    el.realization[{tag, tag + ".t"}] = line_path(0, 0.5, 1, 0.5);
    // A with A*[1,1]^T = e_ket; triangular, so the log is the nilpotent part.
    Mat a = Mat::Identity(2, 2);
    if (kets[k] == 0)
      a(1, 0) = -1;
    else
      a(0, 1) = -1;
    el.conn = profiled_banded({Mat(-mlog(a) / kMass)}, el.chart);
    acc = first ? el : disjoint_union(acc, el);
    first = false;
  }
  if (first) {
    r.tangle = empty_multitangle(0, 0);
    r.tangle.summands.push_back(acc);  // empty graph: the scalar 1
  } else {
    r.tangle = make_multitangle({acc});
  }
  return r;
}

Multitangle tensor_multitangles(const Multitangle& a, const Multitangle& b) {
  Multitangle r;
  r.source_arity = a.source_arity + b.source_arity;
  r.target_arity = a.target_arity + b.target_arity;
  for (const auto& sa : a.summands)
    for (const auto& sb : b.summands) r.summands.push_back(disjoint_union(sa, sb));
  return r;
}

Multitangle layer_multitangle(const Circuit& c, std::size_t layer) {
  if (layer >= c.layers.size()) throw err("ArityMismatch", "layer index out of range");
  const auto& lib = standard_gates();
  std::map<int, const GateApp*> starts;
  std::vector<bool> used(c.qubits, false);
  for (const auto& app : c.layers[layer]) {
    auto it = lib.find(app.gate);
    if (it == lib.end()) throw err("MissingAssignment", "unknown gate " + app.gate);
    if (app.wires.size() != it->second.arity)
      throw err("ArityMismatch", app.gate + " expects " +
                                     std::to_string(it->second.arity) + " wires");
    for (std::size_t i = 0; i < app.wires.size(); ++i) {
      int w = app.wires[i];
      if (w < 0 || w >= c.qubits) throw err("ArityMismatch", "wire out of range");
      if (i > 0 && w != app.wires[i - 1] + 1)
        throw err("ArityMismatch", "gate wires must be ascending and contiguous");
      if (used[w]) throw err("ArityMismatch", "overlapping gates in one layer");
      used[w] = true;
    }
    starts[app.wires.front()] = &app;
  }
  Multitangle acc;
  bool first = true;
  auto append = [&](const Multitangle& m) {
    acc = first ? m : tensor_multitangles(acc, m);
    first = false;
  };
  for (int w = 0; w < c.qubits;) {
    auto it = starts.find(w);
    if (it != starts.end()) {
      append(lib.at(it->second->gate).tangle);
      w += static_cast<int>(it->second->wires.size());
    } else {
      append(identity_multitangle(1, "w" + std::to_string(w)));
      ++w;
    }
  }
  if (first) acc = empty_multitangle(0, 0);
  return acc;
}

Multitangle circuit_multitangle(const Circuit& c) {
  Multitangle acc = identity_multitangle(c.qubits, "in");
  for (std::size_t l = 0; l < c.layers.size(); ++l)
    acc = compose_multitangles(layer_multitangle(c, l), acc);
  return acc;
}

CVec apply_circuit(const Circuit& c, const Register& r) {
  if (static_cast<int>(r.kets.size()) != c.qubits)
    throw err("ArityMismatch", "register size differs from the qubit count");
  AlgebraSpec q = qubit_algebra();
  CVec state = eval_multitangle(r.tangle, q).matrix.col(0);
  for (std::size_t l = 0; l < c.layers.size(); ++l)
    state = eval_multitangle(layer_multitangle(c, l), q).matrix * state;
  return state;
}

TransportGraph wedge(const TransportGraph& a, const TransportGraph& b) {
  for (const TransportGraph* t : {&a, &b}) {
    Boundary tb = targets(t->graph);
    if (tb.slots.size() != 1 || tb.slots[0].color != Color::blue)
      throw err("BoundaryMismatch", "wedge operands need a single blue target");
  }
  TransportGraph u = disjoint_union(a, b);
  TransportGraph pants;
  pants.graph.add_vertex("wp", "wp", Color::blue);
  pants.graph.add_vertex("wq", "wq", Color::blue);
  pants.graph.add_vertex("wr", "wr", Color::blue);
  pants.graph.add_edge("wp", "wr");
  pants.graph.add_edge("wq", "wr");
  pants.graph.source_order = {"wp", "wq"};
  pants.chart = {0, 0, 1, 2};
  pants.realization[{"wp", "wr"}] = point_path(0.5, 0.5);
  pants.realization[{"wq", "wr"}] = point_path(0.5, 1.5);
  return glue(pants, u);
}

TransportGraph element_tangle(const Mat& a, const std::string& tag) {
  TransportGraph el;
  el.graph.add_vertex(tag, tag, Color::green);
  el.graph.add_vertex(tag + ".t", "A", Color::blue);
  el.graph.add_edge(tag, tag + ".t");
  el.graph.source_order = {tag};
  el.chart = {0, 0, 1, 1};
  el.realization[{tag, tag + ".t"}] = line_path(0, 0.5, 1, 0.5);
  // Left-multiplication by a sends the unit vec(I) to vec(a).
  Mat n2 = Mat::Identity(2, 2);
  Mat t = Eigen::kroneckerProduct(n2, a);
  el.conn = profiled_banded({Mat(-mlog(t) / kMass)}, el.chart);
  return el;
}

}  // namespace tc
