#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "mhd/errors.hpp"
#include "mhd/topology.hpp"
#include "test_helpers.hpp"

using namespace mhd;
using std::numbers::pi;

namespace {

const TorusGrid kGrid(32);

bool has_point(const CriticalPointSet& s, Point p, PointKind kind, double tol = 1e-8) {
  for (const auto& c : s.points)
    if (torus_distance(c.position, p) < tol) return c.kind == kind;
  return false;
}

double segment_distance(Point p, Point a, Point b) {
  const Vec2 e = torus_delta(a, b), w = torus_delta(a, p);
  const double t = std::clamp((w[0] * e[0] + w[1] * e[1]) / (e[0] * e[0] + e[1] * e[1]), 0.0, 1.0);
  return std::hypot(w[0] - t * e[0], w[1] - t * e[1]);
}

int count(const CriticalPointSet& s, PointKind kind) {
  int n = 0;
  for (const auto& c : s.points) n += c.kind == kind;
  return n;
}

}  // namespace

TEST_CASE("classify by determinant sign") {
  CHECK(classify(Mat2{{{{0, 1}, {0.5, 0}}}}, 1e-8) == PointKind::saddle);
  CHECK(classify(Mat2{{{{0, -1}, {0.5, 0}}}}, 1e-8) == PointKind::center);
  CHECK(classify(Mat2{}, 1e-8) == PointKind::degenerate);
  CHECK(classify(Mat2{{{{0, 1e-5}, {1e-5, 0}}}}, 1e-8) == PointKind::degenerate);
}

TEST_CASE("tilde T1 critical points") {
  const auto f = make_tilde_t1(kGrid);
  const auto s = find_critical_points(f);
  REQUIRE(s.points.size() == 4);
  CHECK(s.failures.empty());
  CHECK(has_point(s, {0, 0}, PointKind::saddle));
  CHECK(has_point(s, {pi, pi}, PointKind::saddle));
  CHECK(has_point(s, {0, pi}, PointKind::center));
  CHECK(has_point(s, {pi, 0}, PointKind::center));
  for (const auto& p : s.points) {
    CHECK(p.residual < 1e-10 * s.c1);
    CHECK(std::abs(p.jacobian.trace()) < 1e-8 * p.jacobian.max_abs());
    // det grad = -1/2 cos x cos y
    CHECK(p.det == doctest::Approx(-0.5 * std::cos(p.position.x) * std::cos(p.position.y)).epsilon(1e-12));
  }
}

TEST_CASE("T11 critical points") {
  const auto f = make_taylor({1, 1}, 1.0, kGrid);
  const auto s = find_critical_points(f);
  REQUIRE(s.points.size() == 8);
  for (Point p : {Point{0, pi / 2}, Point{0, 3 * pi / 2}, Point{pi, pi / 2}, Point{pi, 3 * pi / 2}})
    CHECK(has_point(s, p, PointKind::saddle));
  for (Point p : {Point{pi / 2, 0}, Point{3 * pi / 2, 0}, Point{pi / 2, pi}, Point{3 * pi / 2, pi}})
    CHECK(has_point(s, p, PointKind::center));
}

TEST_CASE("Taylor fields have 8nm points, half of them saddles") {
  for (int n = 1; n <= 4; ++n)
    for (int m = 1; m <= 4; ++m) {
      INFO("n = " << n << ", m = " << m);
      const auto s = find_critical_points(make_taylor({n, m}, 1.0, kGrid));
      CHECK(s.points.size() == static_cast<std::size_t>(8 * n * m));
      CHECK(count(s, PointKind::saddle) == 4 * n * m);
      CHECK(count(s, PointKind::center) == 4 * n * m);
      for (const auto& p : s.points) CHECK(p.residual < 1e-10 * s.c1);
    }
}

TEST_CASE("perturbed T44 keeps at least 128 regular points") {
  const TorusGrid grid(128);
  const double inv_n = 1.0 / std::sqrt(32.0);
  for (double delta : {1e-5, 1e-4, 1e-3}) {
    INFO("delta = " << delta);
    const auto f = make_taylor({4, 4}, inv_n, grid) + make_tilde_t1(grid, delta);
    const auto s = find_critical_points(f);
    CHECK(count(s, PointKind::saddle) + count(s, PointKind::center) >= 128);
    CHECK(count(s, PointKind::degenerate) == 0);
    CHECK(count(s, PointKind::saddle) == count(s, PointKind::center));
  }
}

TEST_CASE("zero field") {
  const SpectralField2D z(kGrid);
  CHECK_THROWS_AS(find_critical_points(z), InputError);
  const auto [stable, sig] = is_structurally_stable(z);
  CHECK_FALSE(stable);
  CHECK(sig.n_points() == 0);
}

TEST_CASE("integral lines") {
  const auto t1 = make_tilde_t1(kGrid);
  const FieldEvaluator ev(t1);
  const auto psi = stream_function(t1);
  const double osc = 3.0;  // psi = -cos y + cos x / 2 ranges over [-3/2, 3/2]

  SUBCASE("orbit around a center closes") {
    const Point x0{pi / 2, pi / 2};
    const auto line = trace_integral_line(t1, x0, 20.0, 1e-2);
    CHECK_FALSE(line.reached_critical);
    double closest = 1.0;
    bool left = false;
    for (std::size_t i = 1; i < line.points.size(); ++i) {
      const double d = torus_distance(line.points[i], x0);
      if (d > 0.5) left = true;
      if (left) closest = std::min(closest, segment_distance(x0, line.points[i - 1], line.points[i]));
    }
    CHECK(left);
    CHECK(closest < 1e-3);
  }
  SUBCASE("stream function is a first integral") {
    for (Point x0 : {Point{0.3, 1.1}, Point{2.0, 0.4}, Point{4.0, 5.5}}) {
      const auto line = trace_integral_line(t1, x0, 30.0, 1e-2);
      CHECK(std::abs(eval_stream(psi, line.points.back()) - eval_stream(psi, x0)) < 1e-5 * osc);
    }
  }
  SUBCASE("T11 separatrix segment") {
    // y = pi/2 is invariant: the second component cos x cos y vanishes there
    const auto t11 = make_taylor({1, 1}, 1.0, kGrid);
    const auto line = trace_integral_line(t11, {0.01, pi / 2}, 3.0, 1e-2);
    for (const auto& p : line.points) CHECK(std::abs(p.y - pi / 2) < 2e-2);
    CHECK(line.points.back().x > 2.5);
  }
  SUBCASE("seed at a critical point") {
    CHECK_THROWS_AS(trace_integral_line(t1, {pi, pi}, 1.0, 1e-2), InputError);
  }
  SUBCASE("backward trace retraces the forward one") {
    const auto fwd = trace_integral_line(ev, {1.0, 2.0}, 2.0, 1e-2, 1e-8);
    const auto bwd = trace_integral_line(ev, fwd.points.back(), 2.0, 1e-2, 1e-8, true);
    CHECK(torus_distance(bwd.points.back(), {1.0, 2.0}) < 1e-9);
  }
}

TEST_CASE("saddle connections and stability") {
  SUBCASE("T11 has heteroclinic connections") {
    const auto a = analyze_topology(make_taylor({1, 1}, 1.0, kGrid));
    // every unstable branch of the four saddles runs along x in {0, pi} or y in {pi/2, 3pi/2}
    CHECK(a.connections.hetero == 8);
    CHECK(a.signature.self_connections == 0);
    CHECK_FALSE(a.signature.structurally_stable);
  }
  SUBCASE("tilde T1 saddles are not connected") {
    const auto [stable, sig] = is_structurally_stable(make_tilde_t1(kGrid));
    CHECK(stable);
    CHECK(sig.hetero_connections == 0);
    CHECK(sig.n_saddles == 2);
    CHECK(sig.n_centers == 2);
  }
  SUBCASE("no saddles, nothing to connect") {
    const auto c = detect_saddle_connections(make_tilde_t1(kGrid), {});
    CHECK(c.hetero == 0);
    CHECK(c.self == 0);
  }
}

TEST_CASE("signature comparison") {
  const auto a = analyze_topology(make_taylor({1, 1}, 1.0, kGrid)).signature;
  const auto b = analyze_topology(make_tilde_t1(kGrid)).signature;
  CHECK(signatures_equivalent(a, b) == Verdict::distinct);
  CHECK(signatures_equivalent(b, a) == Verdict::distinct);
  CHECK(signatures_equivalent(a, a) == Verdict::indistinguishable);
  TopologySignature s{2, 2, 0, 0, 0, true};
  CHECK(signatures_equivalent(s, s) == Verdict::indistinguishable);
  TopologySignature t = s;
  t.structurally_stable = false;
  t.hetero_connections = 2;
  CHECK(signatures_equivalent(s, t) == Verdict::distinct);
}

TEST_CASE("flow map") {
  const auto seeds = seed_lattice(4);

  SUBCASE("zero velocity gives the identity") {
    std::vector<MHDState> traj{MHDState::zero(kGrid), MHDState::zero(kGrid)};
    traj[1].t = 0.5;
    const auto fm = flow_map(traj, seeds, 0.5);
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      CHECK(torus_distance(fm.images[i], seeds[i]) == 0.0);
      CHECK(fm.jacobians[i].det() == 1.0);
    }
  }
  SUBCASE("steady velocity matches a direct RK4 solve") {
    const auto u = make_tilde_t1(kGrid);
    std::vector<MHDState> traj;
    for (double t : {0.0, 0.05, 0.1, 0.15, 0.2})
      traj.push_back({u, SpectralField2D(kGrid), t});
    const auto fm = flow_map(traj, seeds, 0.2, 1e-3);
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      // hand-rolled RK4 on x' = (sin y, sin x / 2)
      double x = seeds[i].x, y = seeds[i].y;
      auto fx = [](double, double yy) { return std::sin(yy); };
      auto fy = [](double xx, double) { return 0.5 * std::sin(xx); };
      const double h = 1e-4;
      for (int n = 0; n < 2000; ++n) {
        const double a1 = fx(x, y), b1 = fy(x, y);
        const double a2 = fx(x + h / 2 * a1, y + h / 2 * b1), b2 = fy(x + h / 2 * a1, y + h / 2 * b1);
        const double a3 = fx(x + h / 2 * a2, y + h / 2 * b2), b3 = fy(x + h / 2 * a2, y + h / 2 * b2);
        const double a4 = fx(x + h * a3, y + h * b3), b4 = fy(x + h * a3, y + h * b3);
        x += h / 6 * (a1 + 2 * a2 + 2 * a3 + a4);
        y += h / 6 * (b1 + 2 * b2 + 2 * b3 + b4);
      }
      CHECK(torus_distance(fm.images[i], {x, y}) < 1e-8);
      CHECK(fm.jacobians[i].det() == doctest::Approx(1.0).epsilon(1e-8));
    }
  }
  SUBCASE("area preserved for an evolving flow") {
    SimConfig cfg;
    cfg.resolution = 32;
    cfg.nu = cfg.eta = 0.1;
    cfg.t_end = 0.3;
    cfg.dt = 1e-3;
    cfg.output_cadence = 10;
    TrajectoryRecorder rec;
    simulate(cfg, {testing::random_field(kGrid, 3, 5), testing::random_field(kGrid, 3, 6), 0.0}, nullptr, rec);
    const auto fm = flow_map(rec.states, seeds, 0.3);
    for (const auto& J : fm.jacobians) CHECK(std::abs(J.det() - 1.0) < 1e-4);
  }
  SUBCASE("coverage") {
    std::vector<MHDState> traj{MHDState::zero(kGrid)};
    CHECK_THROWS_AS(flow_map(traj, seeds, 0.1), InputError);
    traj[0].t = 0.1;
    CHECK_THROWS_AS(flow_map(traj, seeds, 0.1), InputError);
    CHECK_THROWS_AS(flow_map({}, seeds, 0.0), InputError);
  }
}

TEST_CASE("frozen-in check") {
  const auto seeds = seed_lattice(8);
  SimConfig cfg;
  cfg.resolution = 32;
  cfg.nu = 0.1;
  cfg.eta = 0.0;
  cfg.t_end = 0.25;
  cfg.output_cadence = 10;

  SUBCASE("stationary magnetic field, no flow") {
    TrajectoryRecorder rec;
    simulate(cfg, {SpectralField2D(kGrid), make_tilde_t1(kGrid), 0.0}, nullptr, rec);
    CHECK(verify_frozen_in(rec.states, 0.0, seeds, 0.0) == 0.0);
    CHECK(verify_frozen_in(rec.states, 0.0, seeds, 0.25) < 1e-8);
  }
  SUBCASE("generic ideal-induction run converges under refinement") {
    double err[2];
    for (int r = 0; r < 2; ++r) {
      cfg.resolution = 32 << r;
      const TorusGrid g = cfg.grid();
      TrajectoryRecorder rec;
      const MHDState init{testing::random_field(g, 2, 7) * 0.5, testing::random_field(g, 2, 8), 0.0};
      simulate(cfg, init, nullptr, rec);
      err[r] = verify_frozen_in(rec.states, 0.0, seeds, 0.25);
    }
    CHECK(err[1] < 1e-3);
    CHECK(err[1] * 4.0 <= err[0]);
  }
  SUBCASE("resistive runs are rejected") {
    std::vector<MHDState> traj{MHDState::zero(kGrid)};
    CHECK_THROWS_AS(verify_frozen_in(traj, 0.1, seeds, 0.0), MisuseError);
  }
}

TEST_CASE("Hausdorff distance") {
  std::vector<Point> a, b;
  for (int i = 0; i <= 10; ++i) {
    a.push_back({0.1 * i, 1.0});
    b.push_back({0.1 * i, 1.003});
  }
  CHECK(hausdorff_distance(a, a) == 0.0);
  CHECK(hausdorff_distance(a, b) == doctest::Approx(0.003).epsilon(1e-9));
  // wraps across the seam
  CHECK(hausdorff_distance({{6.28, 0.5}}, {{0.001, 0.5}}) < 0.005);
}
