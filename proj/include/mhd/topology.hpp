#pragma once

#include <utility>
#include <vector>

#include "mhd/evaluator.hpp"
#include "mhd/field.hpp"
#include "mhd/signature.hpp"
#include "mhd/solver.hpp"

namespace mhd {

enum class PointKind { saddle, center, degenerate };

const char* to_string(PointKind k);

struct CriticalPoint {
  Point position;  // in [0, 2pi)^2
  Mat2 jacobian;
  double det = 0.0;
  PointKind kind = PointKind::degenerate;
  double residual = 0.0;  // |f| at the refined position
};

/// Knobs for critical point extraction and separatrix tracing. Relative
/// entries are scaled by c1_norm(f) (or its square, or osc(psi)).
struct TopologyTolerances {
  double newton_tol = 1e-12;  // times c1
  int newton_max_iter = 50;
  double dedup_radius = 1e-8;
  double deg_tol = 1e-8;  // times c1^2
  int seed_grid = 0;      // 0: field resolution; never below it
  double eps_launch = 1e-4;
  double arrival_radius = 1e-2;
  double psi_tol = 1e-6;  // times osc(psi)
  double arclength_cap = 50.0 * kTwoPi;
  double trace_step = 1e-2;
  double stop_tol = 1e-8;  // times c1
  double prune_rel = 0.0;  // evaluator mode pruning
};

/// Seed cell whose Newton run did not converge and whose cell holds no found point.
struct SeedFailure {
  Point seed;
  double residual = 0.0;
  int iterations = 0;
};

struct CriticalPointSet {
  std::vector<CriticalPoint> points;
  std::vector<SeedFailure> failures;
  double c1 = 0.0;
};

/// Newton-refined zeros of f seeded from sign-change cells. Throws InputError for the zero field.
CriticalPointSet find_critical_points(const SpectralField2D& f, const TopologyTolerances& tol = {});

/// Sign-of-determinant rule with a degeneracy band |det| <= deg_tol.
PointKind classify(const Mat2& jac, double deg_tol);

struct IntegralLine {
  std::vector<Point> points;  // wrapped into [0, 2pi)^2
  double arclength = 0.0;
  bool reached_critical = false;  // stopped because |f| fell below stop_tol
};

/// RK4 on dx/ds = f/|f| (or -f/|f| when backward) for the given arclength.
/// Throws InputError when |f(x0)| < stop_tol.
IntegralLine trace_integral_line(const FieldEvaluator& ev, Point x0, double arclen, double h,
                                 double stop_tol, bool backward = false);
IntegralLine trace_integral_line(const SpectralField2D& f, Point x0, double arclen, double h = 1e-2,
                                 double stop_tol = 0.0);

struct ConnectionCount {
  int hetero = 0;
  int self = 0;
  int non_connecting = 0;
};

ConnectionCount detect_saddle_connections(const SpectralField2D& f,
                                          const std::vector<CriticalPoint>& points,
                                          const TopologyTolerances& tol = {});

struct TopologyAnalysis {
  CriticalPointSet critical;
  ConnectionCount connections;
  TopologySignature signature;
};

/// Critical points, connections and the signature in one pass. The zero field
/// yields an empty, unstable signature.
TopologyAnalysis analyze_topology(const SpectralField2D& f, const TopologyTolerances& tol = {});

/// Stable iff every zero is nondegenerate and no separatrix joins two distinct saddles.
std::pair<bool, TopologySignature> is_structurally_stable(const SpectralField2D& f,
                                                          const TopologyTolerances& tol = {});

enum class Verdict { distinct, indistinguishable };

const char* to_string(Verdict v);

/// One-sided witness: distinct only when the invariants prove inequivalence.
Verdict signatures_equivalent(const TopologySignature& a, const TopologySignature& b);

struct FlowMapSample {
  std::vector<Point> seeds;
  std::vector<Point> images;  // wrapped
  std::vector<Mat2> jacobians;
};

/// Lagrangian flow map of the velocity in `trajectory` from time 0 to t, with
/// cubic Lagrange interpolation in time between snapshots. Throws InputError
/// unless the snapshots cover [0, t].
FlowMapSample flow_map(const std::vector<MHDState>& trajectory, const std::vector<Point>& seeds,
                       double t, double dt = 1e-3, double prune_rel = 1e-14);

/// max over seeds of |b(t, Phi(x)) - grad Phi(x) b0(x)| / c1_norm(b0). The
/// trajectory must hold a snapshot at t; throws MisuseError if eta > 0.
double verify_frozen_in(const std::vector<MHDState>& trajectory, double eta,
                        const std::vector<Point>& seeds, double t, double dt = 1e-3);

/// Symmetric Hausdorff distance between polylines in the flat torus metric.
double hausdorff_distance(const std::vector<Point>& a, const std::vector<Point>& b);

/// Regular n x n lattice of seeds offset by half a cell.
std::vector<Point> seed_lattice(int n);

}  // namespace mhd
