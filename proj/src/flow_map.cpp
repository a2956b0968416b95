#include <algorithm>
#include <cmath>

#include "mhd/errors.hpp"
#include "mhd/topology.hpp"

namespace mhd {

namespace {

// Lagrange weights on up to four snapshots bracketing tau.
struct TimeStencil {
  std::size_t first = 0;
  int count = 0;
  double w[4] = {0, 0, 0, 0};
};

TimeStencil stencil(const std::vector<double>& times, double tau) {
  TimeStencil st;
  const std::size_t n = times.size();
  if (n == 1) {
    st.count = 1;
    st.w[0] = 1.0;
    return st;
  }
  const auto hi = std::upper_bound(times.begin(), times.end(), tau);
  std::size_t left = hi == times.begin() ? 0 : static_cast<std::size_t>(hi - times.begin()) - 1;
  left = std::min(left, n - 2);
  st.count = static_cast<int>(std::min<std::size_t>(n, 4));
  st.first = left >= 1 ? left - 1 : 0;
  st.first = std::min(st.first, n - st.count);
  for (int a = 0; a < st.count; ++a) {
    double w = 1.0;
    for (int b = 0; b < st.count; ++b)
      if (b != a) w *= (tau - times[st.first + b]) / (times[st.first + a] - times[st.first + b]);
    st.w[a] = w;
  }
  return st;
}

}  // namespace

FlowMapSample flow_map(const std::vector<MHDState>& trajectory, const std::vector<Point>& seeds, double t,
                       double dt, double prune_rel) {
  if (t < 0.0) throw MisuseError("flow map needs t >= 0");
  if (dt <= 0.0) throw MisuseError("flow map needs dt > 0");
  if (trajectory.empty()) throw InputError("flow map: empty velocity trajectory");
  std::vector<double> times;
  for (const auto& s : trajectory) {
    if (!times.empty() && s.t <= times.back()) throw InputError("flow map: snapshot times must increase");
    times.push_back(s.t);
  }
  const double slack = 1e-12 * std::max(1.0, t);
  if (std::abs(times.front()) > slack || times.back() < t - slack)
    throw InputError("flow map: snapshots cover [" + std::to_string(times.front()) + ", " +
                     std::to_string(times.back()) + "], need [0, " + std::to_string(t) + "]");

  FlowMapSample out;
  out.seeds = seeds;
  const int steps = t > 0.0 ? static_cast<int>(std::ceil(t / dt - 1e-9)) : 0;
  const double h = steps > 0 ? t / steps : 0.0;

  // velocity at time tau, interpolated in coefficient space
  auto velocity_at = [&](double tau) {
    const TimeStencil st = stencil(times, tau);
    SpectralField2D v = trajectory[st.first].u * st.w[0];
    for (int a = 1; a < st.count; ++a) v = v + trajectory[st.first + a].u * st.w[a];
    return FieldEvaluator(v, prune_rel);
  };

  struct Y {
    Point x;
    Mat2 J;
  };
  auto rhs = [](const FieldEvaluator& u, const Y& y) {
    Vec2 v;
    Mat2 G;
    u.value_and_jacobian(y.x, v, G);
    return Y{{v[0], v[1]}, G * y.J};
  };
  auto axpy = [](const Y& y, double a, const Y& k) {
    Y r = y;
    r.x.x += a * k.x.x;
    r.x.y += a * k.x.y;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) r.J.m[i][j] += a * k.J.m[i][j];
    return r;
  };

  const std::ptrdiff_t ns = static_cast<std::ptrdiff_t>(seeds.size());
  std::vector<Y> y(seeds.size());
  for (std::ptrdiff_t s = 0; s < ns; ++s) y[s] = {seeds[s], Mat2::identity()};
  if (steps > 0) {
    // all seeds advance together so each stage velocity is built once
    FieldEvaluator u_start = velocity_at(0.0);
    for (int n = 0; n < steps; ++n) {
      const double tau = n * h;
      const FieldEvaluator u_mid = velocity_at(tau + 0.5 * h);
      FieldEvaluator u_end = velocity_at(n + 1 == steps ? t : tau + h);
#pragma omp parallel for schedule(dynamic, 4)
      for (std::ptrdiff_t s = 0; s < ns; ++s) {
        const Y k1 = rhs(u_start, y[s]);
        const Y k2 = rhs(u_mid, axpy(y[s], 0.5 * h, k1));
        const Y k3 = rhs(u_mid, axpy(y[s], 0.5 * h, k2));
        const Y k4 = rhs(u_end, axpy(y[s], h, k3));
        y[s] = axpy(axpy(axpy(axpy(y[s], h / 6.0, k1), h / 3.0, k2), h / 3.0, k3), h / 6.0, k4);
      }
      u_start = std::move(u_end);
    }
  }
  for (const auto& v : y) {
    out.images.push_back(wrap(v.x));
    out.jacobians.push_back(v.J);
  }
  return out;
}

double verify_frozen_in(const std::vector<MHDState>& trajectory, double eta, const std::vector<Point>& seeds,
                        double t, double dt) {
  if (eta > 0.0) throw MisuseError("frozen-in check requires an ideal (eta = 0) run");
  if (trajectory.empty()) throw InputError("frozen-in check: empty trajectory");
  const auto at_t = std::find_if(trajectory.begin(), trajectory.end(), [&](const MHDState& s) {
    return std::abs(s.t - t) <= 1e-9 * std::max(1.0, t);
  });
  if (at_t == trajectory.end()) throw InputError("frozen-in check: no snapshot at t = " + std::to_string(t));

  const auto fm = flow_map(trajectory, seeds, t, dt);
  const SpectralField2D& b0 = trajectory.front().b;
  const FieldEvaluator e0(b0), et(at_t->b);
  const double scale = c1_norm(b0);
  double worst = 0.0;
  for (std::size_t s = 0; s < seeds.size(); ++s) {
    const Vec2 pushed = fm.jacobians[s].apply(e0.value(seeds[s]));
    const Vec2 now = et.value(fm.images[s]);
    worst = std::max(worst, std::hypot(now[0] - pushed[0], now[1] - pushed[1]));
  }
  return scale > 0.0 ? worst / scale : worst;
}

}  // namespace mhd
