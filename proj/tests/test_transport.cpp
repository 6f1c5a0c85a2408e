#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "transport.hpp"

using namespace tc;
using oracles::expm;
using oracles::random_mat;

namespace {

PathSpec wiggly_path(int segments) {
  PathSpec p;
  for (int i = 0; i <= segments; ++i) {
    double t = double(i) / segments;
    p.samples.push_back({t, 0.5 + 0.3 * std::sin(3.14159 * t), t});
  }
  return p;
}

double rel_err(const Mat& got, const Mat& want) { return (got - want).norm() / want.norm(); }

}  // namespace

TEST_SUITE_BEGIN("transport");

TEST_CASE("constant connection matches the matrix-exponential oracle") {
  std::mt19937 rng(11);
  for (int n : {2, 3}) {
    Mat c = random_mat(rng, n);
    ConnectionSpec conn = constant_connection(c, Mat::Zero(n, n));
    Mat got = transport(conn, unit_x_path(), 1000);
    CHECK(rel_err(got, expm(-c)) <= 1e-8);
  }
}

TEST_CASE("zero connection transports to the exact identity") {
  ConnectionSpec conn = zero_connection(3);
  Mat got = transport(conn, wiggly_path(8), 10);
  CHECK((got - Mat::Identity(3, 3)).norm() == 0.0);
}

TEST_CASE("pure-gauge transport is the endpoint formula") {
  std::mt19937 rng(5);
  Mat k = random_mat(rng, 2, 0.6);
  GaugeMap g = GaugeMap::exp_family(k, 0.8, 0.5, 0.1);
  ConnectionSpec conn = pure_gauge_connection(g);
  PathSpec p = wiggly_path(16);
  Mat got = transport(conn, p, 1000);
  Mat want = g.at(p.samples.back().x, p.samples.back().y) *
             g.at(p.samples.front().x, p.samples.front().y).inverse();
  CHECK(rel_err(got, want) <= 1e-6);
}

TEST_CASE("pure-gauge transport only depends on the endpoints") {
  std::mt19937 rng(17);
  Mat k = random_mat(rng, 2, 0.5);
  ConnectionSpec conn = pure_gauge_connection(GaugeMap::exp_family(k, 1.0, 0.7));
  Mat t1 = transport(conn, line_path(0, 0.5, 1, 0.5), 1000);
  Mat t2 = transport(conn, wiggly_path(64), 1000);
  CHECK((t1 - t2).norm() <= 1e-5);
}

TEST_CASE("RK4 error on constant connections decays at 4th order") {
  std::mt19937 rng(29);
  Mat c = random_mat(rng, 3, 1.2);
  ConnectionSpec conn = constant_connection(c, Mat::Zero(3, 3));
  Mat want = expm(-c);
  std::vector<double> errs;
  for (int steps : {50, 100, 200, 400})
    errs.push_back((transport(conn, unit_x_path(), steps) - want).norm());
  // Least-squares slope of log2(err) against log2(steps).
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < 4; ++i) {
    double x = i, y = std::log2(errs[i]);
    sx += x, sy += y, sxx += x * x, sxy += x * y;
  }
  double slope = -(4 * sxy - sx * sy) / (4 * sxx - sx * sx);
  CHECK(slope >= 3.5);
  CHECK(slope <= 4.5);
}

TEST_CASE("concatenation and reversal identities") {
  std::mt19937 rng(31);
  Mat cx = random_mat(rng, 2, 0.8), cy = random_mat(rng, 2, 0.8);
  ConnectionSpec conn = constant_connection(cx, cy);
  PathSpec a = line_path(0, 0.2, 0.5, 0.8);
  PathSpec b = line_path(0.5, 0.8, 1, 0.3);
  Mat whole = transport(conn, concat_paths(a, b), 2000);
  Mat split = transport(conn, b, 1000) * transport(conn, a, 1000);
  CHECK((whole - split).norm() <= 1e-7);

  Mat fwd = transport(conn, a, 1000);
  Mat bwd = transport(conn, reverse_path(a), 1000);
  CHECK((bwd - fwd.inverse()).norm() <= 1e-7);
}

TEST_CASE("paths outside the chart and bad parameterizations are rejected") {
  ConnectionSpec conn = zero_connection(2);
  CHECK_THROWS_WITH_AS(transport(conn, line_path(0, 0, 2, 0), 10), doctest::Contains("PathOutsideChart"),
                       domain_error);
  PathSpec bad;
  bad.samples = {{0, 0, 0.0}, {0.5, 0, 0.5}, {1, 0, 0.5}};
  CHECK_THROWS_WITH_AS(transport(conn, bad, 10), doctest::Contains("SingularInterpolation"),
                       domain_error);
}

TEST_CASE("identity gauge leaves the connection unchanged") {
  std::mt19937 rng(37);
  Mat cx = random_mat(rng, 2), cy = random_mat(rng, 2);
  ConnectionSpec conn = constant_connection(cx, cy);
  ConnectionSpec acted = gauge_act(GaugeMap::identity(2), conn);
  const auto& s = std::get<ConnectionSpec::Sampled>(acted.v);
  for (const auto& m : s.ax) CHECK((m - cx).norm() <= 1e-12);
  for (const auto& m : s.ay) CHECK((m - cy).norm() <= 1e-12);
}

TEST_CASE("gauge actions compose") {
  std::mt19937 rng(41);
  Mat k1 = random_mat(rng, 2, 0.4), k2 = random_mat(rng, 2, 0.4);
  GaugeMap g1 = GaugeMap::exp_family(k1, 0.7, 0.2);
  GaugeMap g2 = GaugeMap::exp_family(k2, 0.3, 0.9);
  ConnectionSpec conn = constant_connection(random_mat(rng, 2), random_mat(rng, 2));
  ConnectionSpec lhs = gauge_act(g2, gauge_act(g1, conn));
  ConnectionSpec rhs = gauge_act(g2.compose(g1), conn);
  const auto& sl = std::get<ConnectionSpec::Sampled>(lhs.v);
  const auto& sr = std::get<ConnectionSpec::Sampled>(rhs.v);
  REQUIRE(sl.ax.size() == sr.ax.size());
  for (std::size_t i = 0; i < sl.ax.size(); ++i) {
    CHECK((sl.ax[i] - sr.ax[i]).norm() <= 1e-6);
    CHECK((sl.ay[i] - sr.ay[i]).norm() <= 1e-6);
  }
}

TEST_CASE("transport is gauge covariant") {
  std::mt19937 rng(43);
  Mat k = random_mat(rng, 2, 0.5);
  GaugeMap g = GaugeMap::exp_family(k, 0.6, 0.4, 0.2);
  ConnectionSpec conn = constant_connection(random_mat(rng, 2), random_mat(rng, 2));
  PathSpec p = wiggly_path(12);
  Mat lhs = transport(gauge_act(g, conn), p, 1500);
  Mat rhs = g.at(p.samples.back().x, p.samples.back().y) * transport(conn, p, 1500) *
            g.at(p.samples.front().x, p.samples.front().y).inverse();
  CHECK((lhs - rhs).norm() <= 1e-6);
}

TEST_CASE("affine combinations of connections") {
  std::mt19937 rng(47);
  Mat a1 = random_mat(rng, 2), a2 = random_mat(rng, 2);
  ConnectionSpec c1 = constant_connection(a1, Mat::Zero(2, 2));
  ConnectionSpec c2 = constant_connection(a2, Mat::Zero(2, 2));

  ConnectionSpec same = affine_combine({{1.0, {}}}, {c1});
  const auto& k1 = std::get<ConnectionSpec::Constant>(same.v);
  CHECK((k1.cx - a1).norm() == 0.0);

  ConnectionSpec avg = affine_combine({{0.5, {}}, {0.5, {}}}, {c1, c2});
  const auto& k2 = std::get<ConnectionSpec::Constant>(avg.v);
  CHECK((k2.cx - 0.5 * (a1 + a2)).norm() <= 1e-15);

  ConnectionSpec degen = affine_combine({{2.0, {}}, {-1.0, {}}}, {c1, c1});
  const auto& k3 = std::get<ConnectionSpec::Constant>(degen.v);
  CHECK((k3.cx - a1).norm() <= 1e-15);

  CHECK_THROWS_WITH_AS(affine_combine({{0.3, {}}, {0.3, {}}}, {c1, c2}),
                       doctest::Contains("WeightsNotAffine"), domain_error);
}

TEST_CASE("glued connections are local and continuous") {
  std::mt19937 rng(53);
  Mat a = random_mat(rng, 2);
  ConnectionSpec left = constant_connection(a, Mat::Zero(2, 2), {0, 0, 1, 1});
  ConnectionSpec zr = zero_connection(2, {1, 0, 2, 1});
  ConnectionSpec glued = glue_connections(zr, left);

  // Deep in the left interior the zero side is invisible.
  PathSpec inner = line_path(0.05, 0.5, 0.4, 0.5);
  Mat got = transport(glued, inner, 1000);
  Mat want = transport(left, inner, 1000);
  CHECK((got - want).norm() <= 1e-8);

  // Gluing a connection with itself transports like the ungated original.
  ConnectionSpec right_same = constant_connection(a, Mat::Zero(2, 2), {1, 0, 2, 1});
  ConnectionSpec same = glue_connections(right_same, left);
  ConnectionSpec wide = constant_connection(a, Mat::Zero(2, 2), {0, 0, 2, 1});
  PathSpec crossing = line_path(0.2, 0.5, 1.8, 0.5);
  CHECK((transport(same, crossing, 2000) - transport(wide, crossing, 2000)).norm() <= 1e-4);

  CHECK(bump_value({40.0, 0.0}, 0.0) == 0.5);
  CHECK(bump_value({40.0, 0.0}, -0.5) > 1.0 - 1e-12);
  CHECK(bump_value({40.0, 0.0}, 0.5) < 1e-12);

  ConnectionSpec far = constant_connection(a, Mat::Zero(2, 2), {3, 0, 4, 1});
  CHECK_THROWS_WITH_AS(glue_connections(far, left), doctest::Contains("ChartsNotAdjacent"),
                       domain_error);
}

TEST_CASE("synthesize_gate reproduces the gate by transport") {
  Mat id2 = Mat::Identity(2, 2);
  ConnectionSpec triv = synthesize_gate(id2);
  CHECK(triv.is_zero());

  Mat x(2, 2), h(2, 2);
  x << 0, 1, 1, 0;
  h << 1, 1, 1, -1;
  h /= std::sqrt(2.0);
  for (const Mat& u : {x, h}) {
    ConnectionSpec conn = synthesize_gate(u);
    Mat got = transport(conn, unit_x_path(), 1000);
    CHECK((got - u).norm() <= 1e-8);
  }
}

TEST_SUITE_END();
