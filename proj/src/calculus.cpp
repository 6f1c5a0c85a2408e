#include "calculus.hpp"

#include <unsupported/Eigen/KroneckerProduct>

namespace tc {

namespace {

Eigen::Index ipow(Eigen::Index b, Eigen::Index e) {
  Eigen::Index r = 1;
  while (e-- > 0) r *= b;
  return r;
}

Mat kron(const Mat& a, const Mat& b) { return Eigen::kroneckerProduct(a, b); }

}  // namespace

const CVec& AlgebraSpec::element_for(const Edge& e) const {
  auto it = elements.find(edge_str(e));
  return it == elements.end() ? unit : it->second;
}

AlgebraSpec matrix_algebra(int k) {
  AlgebraSpec a;
  a.n = k * k;
  const int n = a.n;
  a.mult = Mat::Zero(n, n * n);
  // vec(AB) in the column-major basis: (AB)_{ij} = sum_l A_{il} B_{lj}.
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      for (int l = 0; l < k; ++l)
        a.mult(i + j * k, (i + l * k) * n + (l + j * k)) = 1.0;
  a.comult = a.mult.adjoint();
  a.unit = CVec::Zero(n);
  a.trace_functional = Mat::Zero(1, n);
  for (int i = 0; i < k; ++i) {
    a.unit(i + i * k) = 1.0;
    a.trace_functional(0, i + i * k) = 1.0;
  }
  return a;
}

AlgebraSpec diagonal_algebra(int n) {
  AlgebraSpec a;
  a.n = n;
  a.mult = Mat::Zero(n, n * n);
  for (int i = 0; i < n; ++i) a.mult(i, i * n + i) = 1.0;
  a.comult = a.mult.adjoint();
  a.unit = CVec::Ones(n);
  a.trace_functional = Mat::Ones(1, n);
  return a;
}

AlgebraSpec qubit_algebra() { return diagonal_algebra(2); }

void validate_algebra(const AlgebraSpec& alg) {
  const Eigen::Index n = alg.n;
  if (alg.mult.rows() != n || alg.mult.cols() != n * n)
    throw err("InterfaceMismatch", "mult must be n x n^2");
  if (alg.unit.size() != n || alg.trace_functional.cols() != n)
    throw err("InterfaceMismatch", "unit/trace dimensions must match n");
  Mat id = Mat::Identity(n, n);
  Mat lhs = alg.mult * kron(alg.mult, id);
  Mat rhs = alg.mult * kron(id, alg.mult);
  if ((lhs - rhs).cwiseAbs().maxCoeff() > 1e-12)
    throw err("InterfaceMismatch", "mult is not associative");
  if ((alg.comult - alg.mult.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
    throw err("InterfaceMismatch", "comult is not the adjoint of mult");
}

Eigen::Index eval_object(const Boundary& b, const AlgebraSpec& alg) {
  Eigen::Index d = 1;
  for (const auto& s : b.slots)
    if (s.color == Color::blue) d *= alg.n;
  return d;
}

Mat iota_embed(const Mat& m, Eigen::Index rows, Eigen::Index cols) {
  if (rows < m.rows() || cols < m.cols())
    throw err("ShrinkNotAllowed", "embedding target is smaller than the matrix");
  Mat r = Mat::Zero(rows, cols);
  r.topLeftCorner(m.rows(), m.cols()) = m;
  return r;
}

Mat kron_swap(Eigen::Index p, Eigen::Index q) {
  Mat s = Mat::Zero(p * q, p * q);
  for (Eigen::Index i = 0; i < p; ++i)
    for (Eigen::Index j = 0; j < q; ++j) s(j * p + i, i * q + j) = 1.0;
  return s;
}

Mat eval_edge(const Edge& e, const TransportGraph& tg, const ConnectionSpec& conn,
              const AlgebraSpec& alg) {
  if (conn.n != alg.n)
    throw err("InterfaceMismatch", "connection fibre dimension differs from the algebra's");
  Color sc = tg.graph.at(e.first).color, dc = tg.graph.at(e.second).color;
  if (sc == Color::green && dc == Color::green) return Mat::Identity(1, 1);
  auto it = tg.realization.find(e);
  if (it == tg.realization.end())
    throw err("MissingAssignment", "edge " + edge_str(e) + " has no path");
  Mat t = transport(conn, it->second, default_transport_steps());
  if (sc == Color::blue && dc == Color::blue) return t;
  if (sc == Color::green) return t * alg.element_for(e);  // cup: column vector
  return alg.trace_functional * t;                        // cap: row covector
}

EvalResult eval_graph(const TransportGraph& tg, const ConnectionSpec& conn,
                      const AlgebraSpec& alg) {
  validate_transport_graph(tg);
  ReducedGraph r = reduce(tg.graph);
  ExprPtr e = extract_expr(r);
  const Eigen::Index n = alg.n;

  Semantics<Mat> sem;
  sem.leaf = [&](const Expr& x) -> Mat {
    if (x.kind == Expr::Kind::gen && x.orig_edge)
      return eval_edge(*x.orig_edge, tg, conn, alg);
    // Inserted copies and identity wires.
    if (x.src.color != x.dst.color)
      throw err("MissingAssignment", "copy edge changes colour");
    Eigen::Index d = x.src.color == Color::blue ? n : 1;
    return Mat::Identity(d, d);
  };
  sem.unit = [] { return Mat::Identity(1, 1); };
  sem.compose = [](Mat later, Mat earlier) -> Mat { return later * earlier; };
  sem.tensor = [](Mat a, Mat b) -> Mat { return kron(a, b); };
  sem.mult = [&](Mat f, Mat g) -> Mat {
    Mat t = kron(f, g);
    return f.rows() == n ? Mat(alg.mult * t) : t;  // 1x1 mult on k is [1]
  };
  sem.comult = [&](Mat f, Mat g) -> Mat {
    Mat t = kron(f, g);
    return f.cols() == n ? Mat(t * alg.comult) : t;
  };
  sem.twist = [](Mat f, Mat g) -> Mat {
    return kron_swap(f.rows(), g.rows()) * kron(f, g);
  };

  EvalResult out;
  out.matrix = substitute(e, sem);
  out.domain_dim = eval_object(sources(tg.graph), alg);
  out.codomain_dim = eval_object(targets(tg.graph), alg);
  return out;
}

EvalResult eval_graph(const TransportGraph& tg, const AlgebraSpec& alg) {
  ConnectionSpec c = tg.conn ? *tg.conn : zero_connection(alg.n, tg.chart);
  return eval_graph(tg, c, alg);
}

EvalResult eval_multitangle(const Multitangle& mt, const AlgebraSpec& alg) {
  EvalResult out;
  out.domain_dim = ipow(alg.n, static_cast<Eigen::Index>(mt.source_arity));
  out.codomain_dim = ipow(alg.n, static_cast<Eigen::Index>(mt.target_arity));
  out.matrix = Mat::Zero(out.codomain_dim, out.domain_dim);
  for (const auto& s : mt.summands) {
    EvalResult f = eval_graph(s, alg);
    // Identity wires on trailing slots cover the common deficit; any leftover
    // dimension is zero-filled by the top-left embedding.
    Eigen::Index ds = static_cast<Eigen::Index>(mt.source_arity) -
                      static_cast<Eigen::Index>(sources(s.graph).blue_count());
    Eigen::Index dt = static_cast<Eigen::Index>(mt.target_arity) -
                      static_cast<Eigen::Index>(targets(s.graph).blue_count());
    Eigen::Index c = std::min(ds, dt);
    Mat padded = kron(f.matrix, Mat::Identity(ipow(alg.n, c), ipow(alg.n, c)));
    out.matrix += iota_embed(padded, out.codomain_dim, out.domain_dim);
  }
  return out;
}

std::vector<EvalResult> eval_2morphism_family(
    const TransportGraph& tg, const ConnectionSpec& conn,
    const std::function<GaugeMap(double)>& gauge_path, int samples,
    const AlgebraSpec& alg) {
  if (samples < 1) throw err("InterfaceMismatch", "need at least one sample");
  std::vector<EvalResult> family;
  for (int s = 0; s < samples; ++s) {
    double t = samples == 1 ? 0.0 : double(s) / (samples - 1);
    ConnectionSpec ct = gauge_act(gauge_path(t), conn);
    family.push_back(eval_graph(tg, ct, alg));
  }
  return family;
}

}  // namespace tc
