#include "transport.hpp"

#include <unsupported/Eigen/MatrixFunctions>
#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace tc {

void validate_path(const PathSpec& p) {
  if (p.samples.size() < 2)
    throw err("SingularInterpolation", "path needs at least 2 samples");
  if (std::abs(p.samples.front().t) > 1e-12 || std::abs(p.samples.back().t - 1.0) > 1e-12)
    throw err("SingularInterpolation", "path parameter must run from 0 to 1");
  for (std::size_t i = 1; i < p.samples.size(); ++i)
    if (p.samples[i].t <= p.samples[i - 1].t)
      throw err("SingularInterpolation", "path parameter must be strictly increasing");
}

PathSpec line_path(double x0, double y0, double x1, double y1) {
  return {{{x0, y0, 0.0}, {x1, y1, 1.0}}};
}

PathSpec point_path(double x, double y) { return line_path(x, y, x, y); }

PathSpec reverse_path(const PathSpec& p) {
  PathSpec r;
  for (auto it = p.samples.rbegin(); it != p.samples.rend(); ++it)
    r.samples.push_back({it->x, it->y, 1.0 - it->t});
  return r;
}

PathSpec concat_paths(const PathSpec& a, const PathSpec& b) {
  validate_path(a);
  validate_path(b);
  PathSpec r;
  for (const auto& s : a.samples) r.samples.push_back({s.x, s.y, s.t / 2});
  for (const auto& s : b.samples) {
    if (s.t == 0.0 && !r.samples.empty() && std::abs(r.samples.back().t - 0.5) < 1e-15) {
      r.samples.back() = {s.x, s.y, 0.5};  // drop the duplicate junction sample
      continue;
    }
    r.samples.push_back({s.x, s.y, 0.5 + s.t / 2});
  }
  return r;
}

PathSpec shift_path(const PathSpec& p, double dx, double dy) {
  PathSpec r = p;
  for (auto& s : r.samples) {
    s.x += dx;
    s.y += dy;
  }
  return r;
}

PathSpec unit_x_path() { return line_path(0.0, 0.5, 1.0, 0.5); }

// ---------------------------------------------------------------- gauge maps

static bool invertible(const Mat& m, Mat* inv = nullptr) {
  Eigen::FullPivLU<Mat> lu(m);
  if (!lu.isInvertible()) return false;
  if (inv) *inv = lu.inverse();
  return true;
}

Mat GaugeMap::at(double x, double y) const {
  Mat g = fn(x, y);
  if (!invertible(g))
    throw err("SingularGauge", "gauge not invertible at (" + std::to_string(x) + "," +
                                   std::to_string(y) + ")");
  return g;
}

static constexpr double kFdStep = 1e-5;

Mat GaugeMap::dx(double x, double y) const {
  if (dfx) return dfx(x, y);
  return (fn(x + kFdStep, y) - fn(x - kFdStep, y)) / (2 * kFdStep);
}

Mat GaugeMap::dy(double x, double y) const {
  if (dfy) return dfy(x, y);
  return (fn(x, y + kFdStep) - fn(x, y - kFdStep)) / (2 * kFdStep);
}

GaugeMap GaugeMap::identity(int n) { return constant(Mat::Identity(n, n)); }

GaugeMap GaugeMap::constant(const Mat& g) {
  GaugeMap m;
  m.n = static_cast<int>(g.rows());
  Mat zero = Mat::Zero(g.rows(), g.cols());
  m.fn = [g](double, double) { return g; };
  m.dfx = [zero](double, double) { return zero; };
  m.dfy = [zero](double, double) { return zero; };
  return m;
}

GaugeMap GaugeMap::exp_family(const Mat& k, double cx, double cy, double c0) {
  GaugeMap m;
  m.n = static_cast<int>(k.rows());
  auto val = [k, cx, cy, c0](double x, double y) -> Mat {
    return ((cx * x + cy * y + c0) * k).exp();
  };
  m.fn = val;
  m.dfx = [k, cx, val](double x, double y) -> Mat { return cx * k * val(x, y); };
  m.dfy = [k, cy, val](double x, double y) -> Mat { return cy * k * val(x, y); };
  return m;
}

GaugeMap GaugeMap::compose(const GaugeMap& inner) const {
  GaugeMap m;
  m.n = n;
  GaugeMap a = *this, b = inner;
  m.fn = [a, b](double x, double y) -> Mat { return a.fn(x, y) * b.fn(x, y); };
  if (dfx && inner.dfx)
    m.dfx = [a, b](double x, double y) -> Mat {
      return a.dfx(x, y) * b.fn(x, y) + a.fn(x, y) * b.dfx(x, y);
    };
  if (dfy && inner.dfy)
    m.dfy = [a, b](double x, double y) -> Mat {
      return a.dfy(x, y) * b.fn(x, y) + a.fn(x, y) * b.dfy(x, y);
    };
  return m;
}

double bump_value(const Bump& bp, double s) { return 0.5 * (1.0 - std::erf(bp.a * s + bp.b)); }

// --------------------------------------------------------------- connections

ConnectionSpec zero_connection(int n, Rect chart) {
  return constant_connection(Mat::Zero(n, n), Mat::Zero(n, n), chart);
}

ConnectionSpec constant_connection(const Mat& cx, const Mat& cy, Rect chart) {
  ConnectionSpec c;
  c.chart = chart;
  c.n = static_cast<int>(cx.rows());
  c.v = ConnectionSpec::Constant{cx, cy};
  return c;
}

ConnectionSpec pure_gauge_connection(const GaugeMap& g, Rect chart) {
  ConnectionSpec c;
  c.chart = chart;
  c.n = g.n;
  c.v = ConnectionSpec::PureGauge{g};
  return c;
}

void ConnectionSpec::a_at(double x, double y, Mat& ax, Mat& ay) const {
  if (const auto* c = std::get_if<Constant>(&v)) {
    ax = c->cx;
    ay = c->cy;
  } else if (const auto* pg = std::get_if<PureGauge>(&v)) {
    Mat g = pg->g.fn(x, y), ginv;
    if (!invertible(g, &ginv)) throw err("SingularGauge", "pure-gauge connection singular");
    ax = -pg->g.dx(x, y) * ginv;
    ay = -pg->g.dy(x, y) * ginv;
  } else if (const auto* s = std::get_if<Sampled>(&v)) {
    if (s->exact) {
      s->exact(x, y, ax, ay);
      return;
    }
    // Bilinear interpolation, clamped to the chart.
    double fx = (x - chart.x0) / (chart.x1 - chart.x0) * (s->nx - 1);
    double fy = (y - chart.y0) / (chart.y1 - chart.y0) * (s->ny - 1);
    fx = std::clamp(fx, 0.0, double(s->nx - 1));
    fy = std::clamp(fy, 0.0, double(s->ny - 1));
    int i = std::min(int(fx), s->nx - 2), j = std::min(int(fy), s->ny - 2);
    if (s->nx == 1) i = 0;
    if (s->ny == 1) j = 0;
    double u = fx - i, w = fy - j;
    auto lerp = [&](const std::vector<Mat>& grid) -> Mat {
      int i1 = std::min(i + 1, s->nx - 1), j1 = std::min(j + 1, s->ny - 1);
      return (1 - u) * (1 - w) * grid[j * s->nx + i] + u * (1 - w) * grid[j * s->nx + i1] +
             (1 - u) * w * grid[j1 * s->nx + i] + u * w * grid[j1 * s->nx + i1];
    };
    ax = lerp(s->ax);
    ay = lerp(s->ay);
  } else if (const auto* b = std::get_if<Banded>(&v)) {
    int k = std::clamp(int(std::floor(y - chart.y0)), 0, int(b->cx.size()) - 1);
    ax = b->cx[k];
    ay = Mat::Zero(n, n);
  } else {
    const auto& gl = std::get<Glued>(v);
    double f = bump_value(gl.bump, x - gl.seam);
    Mat lx, ly, rx, ry;
    auto clamp_into = [](const Rect& r, double& cx2, double& cy2) {
      cx2 = std::clamp(cx2, r.x0, r.x1);
      cy2 = std::clamp(cy2, r.y0, r.y1);
    };
    double xl = x, yl = y, xr = x, yr = y;
    clamp_into(gl.left->chart, xl, yl);
    clamp_into(gl.right->chart, xr, yr);
    gl.left->a_at(xl, yl, lx, ly);
    gl.right->a_at(xr, yr, rx, ry);
    ax = f * lx + (1 - f) * rx;
    ay = f * ly + (1 - f) * ry;
  }
}

bool ConnectionSpec::is_zero() const {
  if (const auto* c = std::get_if<Constant>(&v))
    return c->cx.norm() == 0.0 && c->cy.norm() == 0.0;
  if (const auto* b = std::get_if<Banded>(&v)) {
    for (const auto& m : b->cx)
      if (m.norm() != 0.0) return false;
    return true;
  }
  return false;
}

int default_transport_steps() {
  if (const char* s = std::getenv("TRANSPORTC_STEPS")) {
    int v = std::atoi(s);
    if (v >= 1) return v;
  }
  return 1000;
}

Mat transport(const ConnectionSpec& conn, const PathSpec& path, int steps) {
  validate_path(path);
  if (steps < 1) throw err("SingularInterpolation", "steps must be >= 1");
  for (const auto& s : path.samples)
    if (!conn.chart.contains(s.x, s.y))
      throw err("PathOutsideChart", "path sample (" + std::to_string(s.x) + "," +
                                        std::to_string(s.y) + ") outside chart");
  int n = conn.n;
  if (conn.is_zero()) return Mat::Identity(n, n);

  Mat v = Mat::Identity(n, n);
  Mat ax(n, n), ay(n, n);
  // Integrate segment by segment so kinks never fall inside an RK4 step.
  for (std::size_t k = 0; k + 1 < path.samples.size(); ++k) {
    const auto& p0 = path.samples[k];
    const auto& p1 = path.samples[k + 1];
    double span = p1.t - p0.t;
    double vx = (p1.x - p0.x) / span, vy = (p1.y - p0.y) / span;
    int m = std::max(1, int(std::lround(steps * span)));
    double h = span / m;
    auto f = [&](double t, const Mat& w) -> Mat {
      double s = (t - p0.t) / span;
      conn.a_at(p0.x + s * (p1.x - p0.x), p0.y + s * (p1.y - p0.y), ax, ay);
      return -(ax * vx + ay * vy) * w;
    };
    for (int i = 0; i < m; ++i) {
      double t = p0.t + i * h;
      Mat k1 = f(t, v);
      Mat k2 = f(t + h / 2, v + (h / 2) * k1);
      Mat k3 = f(t + h / 2, v + (h / 2) * k2);
      Mat k4 = f(t + h, v + h * k3);
      v = v + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
    }
  }
  return v;
}

ConnectionSpec gauge_act(const GaugeMap& g, const ConnectionSpec& conn, int nx, int ny) {
  if (g.n != conn.n) throw err("SingularGauge", "gauge dimension mismatch");
  ConnectionSpec out;
  out.chart = conn.chart;
  out.n = conn.n;
  ConnectionSpec::Sampled s;
  s.nx = nx;
  s.ny = ny;
  double dx = (conn.chart.x1 - conn.chart.x0) / (nx - 1);
  double dy = (conn.chart.y1 - conn.chart.y0) / (ny - 1);
  s.ax.resize(std::size_t(nx) * ny);
  s.ay.resize(std::size_t(nx) * ny);
  Mat cax(conn.n, conn.n), cay(conn.n, conn.n);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      double x = conn.chart.x0 + i * dx, y = conn.chart.y0 + j * dy;
      Mat gval = g.at(x, y), ginv;
      if (!invertible(gval, &ginv)) throw err("SingularGauge", "singular on grid");
      // dg via the map's exact partials when available, else fine-step central
      // differences (GaugeMap::dx/dy); coarse grid differencing would spoil
      // the composition law at interior nodes.
      conn.a_at(x, y, cax, cay);
      s.ax[j * nx + i] = gval * cax * ginv - g.dx(x, y) * ginv;
      s.ay[j * nx + i] = gval * cay * ginv - g.dy(x, y) * ginv;
    }
  }
  // Exact evaluator for the integrator (derivatives from the gauge map).
  GaugeMap gc = g;
  ConnectionSpec base = conn;
  s.exact = [gc, base](double x, double y, Mat& ax, Mat& ay) {
    Mat gval = gc.fn(x, y), ginv;
    if (!invertible(gval, &ginv)) throw err("SingularGauge", "singular gauge");
    Mat bx, by;
    base.a_at(x, y, bx, by);
    ax = gval * bx * ginv - gc.dx(x, y) * ginv;
    ay = gval * by * ginv - gc.dy(x, y) * ginv;
  };
  out.v = std::move(s);
  return out;
}

ConnectionSpec affine_combine(const std::vector<ScalarField>& weights,
                              const std::vector<ConnectionSpec>& conns) {
  if (weights.size() != conns.size() || conns.empty())
    throw err("WeightsNotAffine", "need one weight per connection");
  int n = conns[0].n;
  Rect chart = conns[0].chart;
  for (const auto& c : conns)
    if (c.n != n) throw err("WeightsNotAffine", "fibre dimensions differ");
  // Affinity check at chart samples.
  for (int j = 0; j < 5; ++j) {
    for (int i = 0; i < 5; ++i) {
      double x = chart.x0 + i * (chart.x1 - chart.x0) / 4;
      double y = chart.y0 + j * (chart.y1 - chart.y0) / 4;
      double sum = 0;
      for (const auto& w : weights) sum += w.at(x, y);
      if (std::abs(sum - 1.0) > 1e-12)
        throw err("WeightsNotAffine", "weights sum to " + std::to_string(sum));
    }
  }
  bool all_const = true;
  for (const auto& w : weights)
    if (w.fn) all_const = false;
  if (all_const) {
    bool all_constant_conn = true;
    for (const auto& c : conns)
      if (!std::holds_alternative<ConnectionSpec::Constant>(c.v)) all_constant_conn = false;
    if (all_constant_conn) {
      Mat cx = Mat::Zero(n, n), cy = Mat::Zero(n, n);
      for (std::size_t k = 0; k < conns.size(); ++k) {
        const auto& c = std::get<ConnectionSpec::Constant>(conns[k].v);
        cx += weights[k].c * c.cx;
        cy += weights[k].c * c.cy;
      }
      return constant_connection(cx, cy, chart);
    }
  }
  ConnectionSpec out;
  out.chart = chart;
  out.n = n;
  ConnectionSpec::Sampled s;
  s.nx = s.ny = 33;
  std::vector<ScalarField> ws = weights;
  std::vector<ConnectionSpec> cs = conns;
  s.exact = [ws, cs, n](double x, double y, Mat& ax, Mat& ay) {
    ax = Mat::Zero(n, n);
    ay = Mat::Zero(n, n);
    Mat bx, by;
    for (std::size_t k = 0; k < cs.size(); ++k) {
      cs[k].a_at(x, y, bx, by);
      ax += ws[k].at(x, y) * bx;
      ay += ws[k].at(x, y) * by;
    }
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

ConnectionSpec glue_connections(const ConnectionSpec& right, const ConnectionSpec& left,
                                Bump bump, std::optional<double> seam) {
  if (left.n != right.n) throw err("ChartsNotAdjacent", "fibre dimensions differ");
  double s = seam ? *seam : left.chart.x1;
  if (std::abs(left.chart.x1 - s) > 1e-9 || std::abs(right.chart.x0 - s) > 1e-9)
    throw err("ChartsNotAdjacent", "charts do not abut at seam x=" + std::to_string(s));
  ConnectionSpec out;
  out.chart = {left.chart.x0, std::min(left.chart.y0, right.chart.y0), right.chart.x1,
               std::max(left.chart.y1, right.chart.y1)};
  out.n = left.n;
  out.v = ConnectionSpec::Glued{std::make_shared<ConnectionSpec>(left),
                                std::make_shared<ConnectionSpec>(right), bump, s};
  return out;
}

ConnectionSpec synthesize_gate(const Mat& u) {
  int n = static_cast<int>(u.rows());
  if (!invertible(u)) throw err("LogBranchFailure", "gate matrix not invertible");
  Mat l = u.log();
  if (!l.allFinite() || (l.exp() - u).norm() > 1e-8 * std::max(1.0, u.norm()))
    throw err("LogBranchFailure", "principal logarithm failed for gate matrix");
  return constant_connection(-l, Mat::Zero(n, n), {0, 0, 1, 1});
}

ConnectionSpec banded_connection(const std::vector<Mat>& cx, Rect chart) {
  if (cx.empty()) throw err("SingularInterpolation", "banded connection needs bands");
  ConnectionSpec c;
  c.chart = chart;
  c.n = static_cast<int>(cx[0].rows());
  c.v = ConnectionSpec::Banded{cx};
  return c;
}

ConnectionSpec shift_connection(const ConnectionSpec& c, double dx, double dy) {
  ConnectionSpec out = c;
  out.chart = {c.chart.x0 + dx, c.chart.y0 + dy, c.chart.x1 + dx, c.chart.y1 + dy};
  if (std::holds_alternative<ConnectionSpec::Constant>(c.v) ||
      std::holds_alternative<ConnectionSpec::Banded>(c.v))
    return out;  // translation-invariant (bands are anchored to the chart)
  ConnectionSpec::Sampled s;
  s.nx = s.ny = 33;
  ConnectionSpec base = c;
  s.exact = [base, dx, dy](double x, double y, Mat& ax, Mat& ay) {
    base.a_at(x - dx, y - dy, ax, ay);
  };
  s.ax.resize(std::size_t(s.nx) * s.ny);
  s.ay.resize(std::size_t(s.nx) * s.ny);
  for (int j = 0; j < s.ny; ++j)
    for (int i = 0; i < s.nx; ++i) {
      double x = out.chart.x0 + i * (out.chart.x1 - out.chart.x0) / (s.nx - 1);
      double y = out.chart.y0 + j * (out.chart.y1 - out.chart.y0) / (s.ny - 1);
      s.exact(x, y, s.ax[j * s.nx + i], s.ay[j * s.nx + i]);
    }
  out.v = std::move(s);
  return out;
}

ConnectionSpec make_gluable(const ConnectionSpec& c, bool left_collar, bool right_collar,
                            double margin, Bump bump) {
  ConnectionSpec out;
  out.chart = c.chart;
  out.n = c.n;
  ConnectionSpec::Sampled s;
  s.nx = s.ny = 33;
  ConnectionSpec base = c;
  Rect ch = c.chart;
  s.exact = [base, ch, left_collar, right_collar, margin, bump](double x, double y, Mat& ax,
                                                                Mat& ay) {
    base.a_at(x, y, ax, ay);
    double w = 1.0;
    if (right_collar) w *= bump_value(bump, x - (ch.x1 - margin));
    if (left_collar) w *= 1.0 - bump_value(bump, x - (ch.x0 + margin));
    ax *= w;
    ay *= w;
  };
  s.ax.resize(std::size_t(s.nx) * s.ny);
  s.ay.resize(std::size_t(s.nx) * s.ny);
  for (int j = 0; j < s.ny; ++j)
    for (int i = 0; i < s.nx; ++i) {
      double x = ch.x0 + i * (ch.x1 - ch.x0) / (s.nx - 1);
      double y = ch.y0 + j * (ch.y1 - ch.y0) / (s.ny - 1);
      s.exact(x, y, s.ax[j * s.nx + i], s.ay[j * s.nx + i]);
    }
  out.v = std::move(s);
  return out;
}

}  // namespace tc
