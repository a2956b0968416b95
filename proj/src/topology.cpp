#include "mhd/topology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mhd/errors.hpp"
#include "mhd/fft.hpp"

namespace mhd {

const char* to_string(PointKind k) {
  switch (k) {
    case PointKind::saddle: return "saddle";
    case PointKind::center: return "center";
    case PointKind::degenerate: return "degenerate";
  }
  return "?";
}

const char* to_string(Verdict v) { return v == Verdict::distinct ? "distinct" : "indistinguishable"; }

PointKind classify(const Mat2& jac, double deg_tol) {
  const double d = jac.det();
  if (d < -deg_tol) return PointKind::saddle;
  if (d > deg_tol) return PointKind::center;
  return PointKind::degenerate;
}

namespace {

double norm(const Vec2& v) { return std::hypot(v[0], v[1]); }

bool is_zero_field(const SpectralField2D& f) {
  for (int c = 0; c < 2; ++c)
    for (const auto& z : f.component(c))
      if (z != Complex{}) return false;
  return true;
}

std::vector<double> real_samples(const Spectrum& s, const TorusGrid& g, int n) {
  const auto z = spectrum_to_grid(s, g, n);
  std::vector<double> out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = z[i].real();
  return out;
}

struct NewtonResult {
  bool ok = false;
  Point x;
  double residual = 0.0;
  int iterations = 0;
};

NewtonResult newton(const FieldEvaluator& ev, Point x0, double tol, int max_iter) {
  NewtonResult res;
  Point x = x0;
  Vec2 v;
  Mat2 J;
  ev.value_and_jacobian(x, v, J);
  double r = norm(v);
  int polish = 0;
  for (int it = 0; it < max_iter; ++it) {
    res.iterations = it;
    if (r <= tol && ++polish > 2) break;
    const double d = J.det();
    if (d == 0.0 || !std::isfinite(d)) break;
    const Vec2 dx{-(J.m[1][1] * v[0] - J.m[0][1] * v[1]) / d, -(-J.m[1][0] * v[0] + J.m[0][0] * v[1]) / d};
    double alpha = 1.0;
    bool moved = false;
    for (int halve = 0; halve < 30; ++halve, alpha *= 0.5) {
      const Point trial{x.x + alpha * dx[0], x.y + alpha * dx[1]};
      Vec2 tv;
      Mat2 tJ;
      ev.value_and_jacobian(trial, tv, tJ);
      const double tr = norm(tv);
      if (tr < r) {
        x = trial, v = tv, J = tJ, r = tr;
        moved = true;
        break;
      }
    }
    if (!moved) break;  // stalled, usually at roundoff
  }
  res.x = wrap(x);
  res.residual = r;
  res.ok = r <= tol;
  return res;
}

bool in_cell(Point p, int i, int j, double h) {
  // cell [i h, (i+1) h] x [j h, (j+1) h] with wrap, plus a hair of slack
  const double slack = 1e-9;
  auto inside = [&](double c, int idx) {
    const double lo = idx * h;
    double d = c - lo;
    if (d < -slack) d += kTwoPi;
    if (d > kTwoPi - slack) d -= kTwoPi;
    return d >= -slack && d <= h + slack;
  };
  return inside(p.x, i) && inside(p.y, j);
}

}  // namespace

CriticalPointSet find_critical_points(const SpectralField2D& f, const TopologyTolerances& tol) {
  if (is_zero_field(f)) throw InputError("critical points requested for the zero field");
  CriticalPointSet out;
  out.c1 = c1_norm(f);
  const auto& g = f.grid();
  const int n = std::max(g.resolution(), tol.seed_grid);
  const double h = kTwoPi / n;
  const auto s0 = real_samples(f.component(0), g, n);
  const auto s1 = real_samples(f.component(1), g, n);
  auto at = [n](int i, int j) { return static_cast<std::size_t>(i % n) * n + (j % n); };

  std::vector<std::pair<int, int>> cells;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (const auto* s : {&s0, &s1}) {
        const double c[4] = {(*s)[at(i, j)], (*s)[at(i + 1, j)], (*s)[at(i, j + 1)], (*s)[at(i + 1, j + 1)]};
        if (*std::min_element(c, c + 4) <= 0.0 && *std::max_element(c, c + 4) >= 0.0) {
          cells.emplace_back(i, j);
          break;
        }
      }
    }
  }

  const FieldEvaluator ev(f, tol.prune_rel);
  const double ftol = tol.newton_tol * out.c1;
  std::vector<NewtonResult> runs(cells.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(cells.size()); ++c) {
    const Point seed{(cells[c].first + 0.5) * h, (cells[c].second + 0.5) * h};
    runs[c] = newton(ev, seed, ftol, tol.newton_max_iter);
  }

  for (const auto& r : runs) {
    if (!r.ok) continue;
    const bool dup = std::any_of(out.points.begin(), out.points.end(), [&](const CriticalPoint& p) {
      return torus_distance(p.position, r.x) < tol.dedup_radius;
    });
    if (dup) continue;
    CriticalPoint cp;
    cp.position = r.x;
    cp.residual = r.residual;
    out.points.push_back(cp);
  }
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (runs[c].ok) continue;
    const auto [i, j] = cells[c];
    const bool covered = std::any_of(out.points.begin(), out.points.end(),
                                     [&](const CriticalPoint& p) { return in_cell(p.position, i, j, h); });
    if (!covered) out.failures.push_back({{(i + 0.5) * h, (j + 0.5) * h}, runs[c].residual, runs[c].iterations});
  }

  const double deg_tol = tol.deg_tol * out.c1 * out.c1;
  for (auto& p : out.points) {
    Vec2 v;
    ev.value_and_jacobian(p.position, v, p.jacobian);
    p.det = p.jacobian.det();
    p.kind = classify(p.jacobian, deg_tol);
  }
  std::sort(out.points.begin(), out.points.end(), [](const CriticalPoint& a, const CriticalPoint& b) {
    return a.position.x != b.position.x ? a.position.x < b.position.x : a.position.y < b.position.y;
  });
  return out;
}

namespace {

// Integrates the normalized field; `arrived(p, s)` is polled after every step.
template <class Arrived>
IntegralLine integrate_line(const FieldEvaluator& ev, Point x0, double arclen, double h, double stop_tol,
                            double sign, Arrived&& arrived) {
  IntegralLine line;
  auto dir = [&](Point p, Vec2& d) {
    const Vec2 v = ev.value(p);
    const double s = norm(v);
    if (s < stop_tol) return false;
    d = {sign * v[0] / s, sign * v[1] / s};
    return true;
  };
  Point x = x0;
  line.points.push_back(wrap(x));
  double travelled = 0.0;
  while (travelled < arclen) {
    const double step = std::min(h, arclen - travelled);
    Vec2 k1, k2, k3, k4;
    if (!dir(x, k1) || !dir({x.x + 0.5 * step * k1[0], x.y + 0.5 * step * k1[1]}, k2) ||
        !dir({x.x + 0.5 * step * k2[0], x.y + 0.5 * step * k2[1]}, k3) ||
        !dir({x.x + step * k3[0], x.y + step * k3[1]}, k4)) {
      line.reached_critical = true;
      break;
    }
    x.x += step / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
    x.y += step / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
    travelled += step;
    line.points.push_back(wrap(x));
    if (arrived(line.points.back(), travelled)) break;
  }
  line.arclength = travelled;
  return line;
}

}  // namespace

IntegralLine trace_integral_line(const FieldEvaluator& ev, Point x0, double arclen, double h, double stop_tol,
                                 bool backward) {
  if (norm(ev.value(x0)) < stop_tol)
    throw InputError("integral line seeded at a critical point");
  if (h <= 0.0 || arclen < 0.0) throw MisuseError("trace needs h > 0 and arclen >= 0");
  return integrate_line(ev, x0, arclen, h, stop_tol, backward ? -1.0 : 1.0, [](Point, double) { return false; });
}

IntegralLine trace_integral_line(const SpectralField2D& f, Point x0, double arclen, double h,
                                 double stop_tol) {
  const FieldEvaluator ev(f);
  if (stop_tol <= 0.0) stop_tol = TopologyTolerances{}.stop_tol * c1_norm(f);
  return trace_integral_line(ev, x0, arclen, h, stop_tol);
}

namespace {

enum class Outcome { none, hetero, self };

Vec2 eigenvector(const Mat2& J, double lambda) {
  const Vec2 a{J.m[0][1], lambda - J.m[0][0]};
  const Vec2 b{lambda - J.m[1][1], J.m[1][0]};
  const Vec2 v = norm(a) >= norm(b) ? a : b;
  const double s = norm(v);
  return {v[0] / s, v[1] / s};
}

double stream_oscillation(const SpectralField2D& f) {
  const auto psi = stream_function(f);
  const auto s = real_samples(psi.coeffs, f.grid(), 2 * f.resolution());
  const auto [lo, hi] = std::minmax_element(s.begin(), s.end());
  return *hi - *lo;
}

}  // namespace

ConnectionCount detect_saddle_connections(const SpectralField2D& f, const std::vector<CriticalPoint>& points,
                                          const TopologyTolerances& tol) {
  std::vector<const CriticalPoint*> saddles;
  for (const auto& p : points)
    if (p.kind == PointKind::saddle) saddles.push_back(&p);
  ConnectionCount out;
  if (saddles.empty()) return out;

  const FieldEvaluator ev(f, tol.prune_rel);
  const double c1 = c1_norm(f);
  const double stop_tol = tol.stop_tol * c1;
  const double psi_tol = tol.psi_tol * stream_oscillation(f);
  std::vector<double> psi(saddles.size());
  for (std::size_t i = 0; i < saddles.size(); ++i) psi[i] = ev.stream(saddles[i]->position);

  struct Job {
    std::size_t origin;
    Point start;
    bool backward;
  };
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < saddles.size(); ++i) {
    const Mat2& J = saddles[i]->jacobian;
    const double half_tr = 0.5 * J.trace();
    const double lam = std::sqrt(std::max(half_tr * half_tr - J.det(), 0.0));
    const Vec2 vu = eigenvector(J, half_tr + lam), vs = eigenvector(J, half_tr - lam);
    const Point s = saddles[i]->position;
    for (double sgn : {1.0, -1.0}) {
      jobs.push_back({i, {s.x + sgn * tol.eps_launch * vu[0], s.y + sgn * tol.eps_launch * vu[1]}, false});
      jobs.push_back({i, {s.x + sgn * tol.eps_launch * vs[0], s.y + sgn * tol.eps_launch * vs[1]}, true});
    }
  }

  std::vector<Outcome> outcome(jobs.size(), Outcome::none);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(jobs.size()); ++j) {
    const Job& job = jobs[j];
    const Point origin = saddles[job.origin]->position;
    double farthest = 0.0;
    Outcome result = Outcome::none;
    auto arrived = [&](Point p, double) {
      farthest = std::max(farthest, torus_distance(p, origin));
      for (std::size_t k = 0; k < saddles.size(); ++k) {
        if (torus_distance(p, saddles[k]->position) >= tol.arrival_radius) continue;
        if (k == job.origin) {
          if (farthest < 2.0 * tol.arrival_radius) continue;
          result = Outcome::self;
          return true;
        }
        if (std::abs(psi[k] - psi[job.origin]) < psi_tol) {
          result = Outcome::hetero;
          return true;
        }
      }
      return false;
    };
    integrate_line(ev, job.start, tol.arclength_cap, tol.trace_step, stop_tol, job.backward ? -1.0 : 1.0,
                   arrived);
    outcome[j] = result;
  }

  // each connecting orbit is an unstable branch of one saddle and a stable branch of another
  int hetero_fwd = 0, hetero_bwd = 0, self_fwd = 0, self_bwd = 0;
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    if (outcome[j] == Outcome::none) ++out.non_connecting;
    if (outcome[j] == Outcome::hetero) ++(jobs[j].backward ? hetero_bwd : hetero_fwd);
    if (outcome[j] == Outcome::self) ++(jobs[j].backward ? self_bwd : self_fwd);
  }
  out.hetero = std::max(hetero_fwd, hetero_bwd);
  out.self = std::max(self_fwd, self_bwd);
  return out;
}

TopologyAnalysis analyze_topology(const SpectralField2D& f, const TopologyTolerances& tol) {
  TopologyAnalysis a;
  if (is_zero_field(f)) return a;
  a.critical = find_critical_points(f, tol);
  for (const auto& p : a.critical.points) {
    if (p.kind == PointKind::saddle) ++a.signature.n_saddles;
    if (p.kind == PointKind::center) ++a.signature.n_centers;
    if (p.kind == PointKind::degenerate) ++a.signature.n_degenerate;
  }
  a.connections = detect_saddle_connections(f, a.critical.points, tol);
  a.signature.hetero_connections = a.connections.hetero;
  a.signature.self_connections = a.connections.self;
  a.signature.structurally_stable = a.signature.n_degenerate == 0 && a.signature.hetero_connections == 0;
  return a;
}

std::pair<bool, TopologySignature> is_structurally_stable(const SpectralField2D& f,
                                                          const TopologyTolerances& tol) {
  const auto a = analyze_topology(f, tol);
  return {a.signature.structurally_stable, a.signature};
}

Verdict signatures_equivalent(const TopologySignature& a, const TopologySignature& b) {
  if (a.n_saddles != b.n_saddles || a.n_centers != b.n_centers) return Verdict::distinct;
  if (a.structurally_stable != b.structurally_stable && a.hetero_connections != b.hetero_connections)
    return Verdict::distinct;
  return Verdict::indistinguishable;
}

double hausdorff_distance(const std::vector<Point>& a, const std::vector<Point>& b) {
  if (a.empty() || b.empty()) throw InputError("Hausdorff distance of an empty polyline");
  auto directed = [](const std::vector<Point>& from, const std::vector<Point>& to) {
    double worst = 0.0;
    for (const auto& p : from) {
      double best = std::numeric_limits<double>::infinity();
      if (to.size() == 1) best = torus_distance(p, to[0]);
      for (std::size_t i = 0; i + 1 < to.size(); ++i) {
        const Vec2 e = torus_delta(to[i], to[i + 1]);
        const Vec2 w = torus_delta(to[i], p);
        const double ee = e[0] * e[0] + e[1] * e[1];
        const double t = ee > 0.0 ? std::clamp((w[0] * e[0] + w[1] * e[1]) / ee, 0.0, 1.0) : 0.0;
        best = std::min(best, std::hypot(w[0] - t * e[0], w[1] - t * e[1]));
      }
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

std::vector<Point> seed_lattice(int n) {
  if (n < 1) throw MisuseError("seed lattice needs n >= 1");
  std::vector<Point> out;
  const double h = kTwoPi / n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.push_back({(i + 0.5) * h, (j + 0.5) * h});
  return out;
}

}  // namespace mhd
