#pragma once
#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "errors.hpp"

namespace tc {

using Mat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

struct Rect {
  double x0 = 0, y0 = 0, x1 = 1, y1 = 1;
  bool contains(double x, double y, double tol = 1e-9) const {
    return x >= x0 - tol && x <= x1 + tol && y >= y0 - tol && y <= y1 + tol;
  }
};

// Piecewise-linear path in a chart; t strictly increasing from 0 to 1.
struct PathSpec {
  struct Sample {
    double x, y, t;
  };
  std::vector<Sample> samples;
};

void validate_path(const PathSpec& p);  // SingularInterpolation on bad t grids
PathSpec line_path(double x0, double y0, double x1, double y1);
PathSpec point_path(double x, double y);  // constant path
PathSpec reverse_path(const PathSpec& p);
// a then b, re-parametrized to [0,1/2] and [1/2,1].
PathSpec concat_paths(const PathSpec& a, const PathSpec& b);
PathSpec shift_path(const PathSpec& p, double dx, double dy);

// Fibre gauge g : chart -> GL_n(C), closed-form with optional exact partials.
struct GaugeMap {
  int n = 1;
  std::function<Mat(double, double)> fn;
  std::function<Mat(double, double)> dfx, dfy;  // optional exact derivatives

  Mat at(double x, double y) const;          // throws SingularGauge
  Mat dx(double x, double y) const;          // exact or central differences
  Mat dy(double x, double y) const;

  static GaugeMap identity(int n);
  static GaugeMap constant(const Mat& g);
  // g(x,y) = exp((cx*x + cy*y + c0) * k)
  static GaugeMap exp_family(const Mat& k, double cx, double cy, double c0 = 0);
  GaugeMap compose(const GaugeMap& inner) const;  // pointwise product this*inner
};

struct Bump {
  double a = 40.0, b = 0.0;
};
// f(s) = (1 - erf(a*s + b)) / 2: ~1 for s << 0, ~0 for s >> 0, 1/2 at s = 0.
double bump_value(const Bump& bp, double s);

struct ConnectionSpec;
using ConnPtr = std::shared_ptr<const ConnectionSpec>;

// Local form of a connection d + A on a trivial bundle over a planar chart.
struct ConnectionSpec {
  struct Constant {
    Mat cx, cy;
  };
  struct PureGauge {
    GaugeMap g;  // A = -(dg) g^{-1}
  };
  struct Sampled {
    int nx = 0, ny = 0;          // grid resolution over the chart
    std::vector<Mat> ax, ay;     // row-major, index j*nx + i
    // Optional closed form behind the grid (used by the integrator when set;
    // the grid is the serialized/comparable representation).
    std::function<void(double, double, Mat&, Mat&)> exact;
  };
  struct Glued {
    ConnPtr left, right;
    Bump bump;
    double seam = 0;
  };
  // Constant 1-form per unit-height horizontal band (Cy = 0): lets one
  // connection carry a different transport on each parallel wire.
  struct Banded {
    std::vector<Mat> cx;  // band k covers y in [chart.y0 + k, chart.y0 + k + 1)
  };

  Rect chart;
  int n = 1;
  std::variant<Constant, PureGauge, Sampled, Glued, Banded> v;

  // A evaluated at a point (clamped into the chart for sampled grids).
  void a_at(double x, double y, Mat& ax, Mat& ay) const;
  bool is_zero() const;
};

ConnectionSpec zero_connection(int n, Rect chart = {});
ConnectionSpec constant_connection(const Mat& cx, const Mat& cy, Rect chart = {});
ConnectionSpec pure_gauge_connection(const GaugeMap& g, Rect chart = {});

// Fundamental solution at t=1 of v' = -(Ax gx' + Ay gy') v, classical RK4.
Mat transport(const ConnectionSpec& conn, const PathSpec& path, int steps = 1000);
int default_transport_steps();  // 1000, overridable via TRANSPORTC_STEPS

// A |-> g A g^{-1} - (dg) g^{-1}; returns a Sampled connection on conn's chart.
ConnectionSpec gauge_act(const GaugeMap& g, const ConnectionSpec& conn,
                         int nx = 33, int ny = 33);

// Scalar weight field: a constant or a function of the chart point.
struct ScalarField {
  double c = 0;
  std::function<double(double, double)> fn;  // used when set
  double at(double x, double y) const { return fn ? fn(x, y) : c; }
};

ConnectionSpec affine_combine(const std::vector<ScalarField>& weights,
                              const std::vector<ConnectionSpec>& conns);

// d + f*A_left + f'*A_right with f = bump(x - seam); charts must abut at seam.
ConnectionSpec glue_connections(const ConnectionSpec& right, const ConnectionSpec& left,
                                Bump bump = {}, std::optional<double> seam = {});

// Constant connection with Cx = -log(u): transport along the unit x-path is u.
ConnectionSpec synthesize_gate(const Mat& u);

ConnectionSpec banded_connection(const std::vector<Mat>& cx, Rect chart);

// Translate a connection's chart by (dx, dy) together with its 1-form.
ConnectionSpec shift_connection(const ConnectionSpec& c, double dx, double dy);

// Scale A by a smooth window vanishing on the chart's left/right collar so the
// connection becomes gluable there; `margin` is the collar depth.
ConnectionSpec make_gluable(const ConnectionSpec& c, bool left_collar, bool right_collar,
                            double margin = 0.15, Bump bump = {});

PathSpec unit_x_path();  // straight path across the unit chart

}  // namespace tc
