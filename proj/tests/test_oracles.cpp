#include <cmath>
#include <numbers>

#include "doctest.h"
#include "mhd/errors.hpp"
#include "mhd/oracles.hpp"
#include "mhd/solver.hpp"

using namespace mhd;
using std::numbers::pi;

TEST_CASE("decaying Taylor oracle") {
  const TorusGrid grid(32);
  const DecayingTaylorOracle o{{4, 4}, 0.5, 1.0 / std::sqrt(32.0)};
  const auto s0 = decaying_taylor(o, grid, 0.0);
  CHECK(l2_norm(s0.u) == 0.0);
  CHECK(l2_norm(s0.b - make_taylor({4, 4}, o.amplitude, grid)) == 0.0);

  const double half_life = std::log(2.0) / (o.eta * 32.0);
  const auto sh = decaying_taylor(o, grid, half_life);
  CHECK(l2_norm(sh.b) == doctest::Approx(0.5 * l2_norm(s0.b)).epsilon(1e-14));

  for (double t : {0.0, 0.01, 0.3, 1.0}) {
    CHECK(decaying_taylor_residual(o, grid, t, 0.5) < 1e-10);
    SpectralField2D du(grid), db(grid);
    nonlinear_rhs(decaying_taylor(o, grid, t), true, du, db);
    CHECK(l2_norm(du) < 1e-10);
    CHECK(l2_norm(db) < 1e-10);
  }
}

TEST_CASE("forced closed form") {
  const TorusGrid grid(32);
  const double eta = 0.5;
  const ForcedOracle o({4, 4}, {1, 1}, eta, grid);
  const auto t44 = make_taylor({4, 4}, 1.0, grid);
  const auto t11 = make_taylor({1, 1}, 1.0, grid);

  CHECK(l2_norm(forced_exact_b(o, 0.0) - t44) == 0.0);
  // t -> infinity: T_N2 / (eta N2^2)
  CHECK(l2_norm(forced_exact_b(o, 200.0) - t11 * (1.0 / (eta * 2.0))) < 1e-14);

  // heat-equation residual with a centered time difference as the derivative oracle
  for (double t : {0.05, 0.4, 1.5}) {
    const double h = 1e-4;
    const auto dbdt = (forced_exact_b(o, t + h) - forced_exact_b(o, t - h)) * (1.0 / (2 * h));
    const auto res = dbdt - laplacian(forced_exact_b(o, t)) * eta - o.f2();
    CHECK(l2_norm(res) < 1e-6 * l2_norm(dbdt));
    const auto exact_res = o.exact_b_rate(t) - laplacian(o.exact_b(t)) * eta - o.f2();
    CHECK(l2_norm(exact_res) < 1e-10);
  }
}

TEST_CASE("forced oracle requires N2^2 < N^2") {
  const TorusGrid grid(16);
  CHECK_THROWS_AS(ForcedOracle({1, 1}, {1, 1}, 0.5, grid), ConfigError);
  CHECK_THROWS_AS(ForcedOracle({1, 1}, {2, 1}, 0.5, grid), ConfigError);
}

TEST_CASE("f1 cancels the Lorentz force of the closed form") {
  const TorusGrid grid(32);
  const ForcedOracle o({4, 4}, {1, 1}, 0.5, grid);
  CHECK(l2_norm(forcing_f1(o, 0.0)) == 0.0);
  for (double t : {0.1, 0.5, 1.0}) {
    const auto f1 = forcing_f1(o, t);
    CHECK(std::abs(f1.coeff(0, 0, 0)) < 1e-14);
    CHECK(std::abs(f1.coeff(1, 0, 0)) < 1e-14);
    SpectralField2D du(grid), db(grid);
    nonlinear_rhs(MHDState{SpectralField2D(grid), o.exact_b(t), t}, true, du, db);
    // roundoff floor set by the O(1) Taylor self-interaction that projection removes
    CHECK(l2_norm(du + f1) < 1e-12 * std::max(l2_norm(f1), 1.0));
  }
}

TEST_CASE("solver with theorem2 forcing keeps u at zero") {
  SimConfig cfg;
  cfg.resolution = 32;
  cfg.dt = 2e-3;
  cfg.t_end = 1.0;
  cfg.output_cadence = 50;
  cfg.forcing.kind = ForcingKind::theorem2;
  const auto forcing = make_forcing(cfg.forcing, cfg.grid(), cfg.eta);
  const ForcedOracle o({4, 4}, {1, 1}, cfg.eta, cfg.grid());
  TrajectoryRecorder rec;
  MHDState init{SpectralField2D(cfg.grid()), make_taylor({4, 4}, 1.0, cfg.grid()), 0.0};
  const auto fin = simulate(cfg, init, forcing.get(), rec);
  for (const auto& s : rec.states) {
    CHECK(l2_norm(s.u) < 1e-8);
    CHECK(l2_norm(s.b - o.exact_b(s.t)) < 1e-6 * l2_norm(o.exact_b(s.t)));
  }
  CHECK(fin.t == 1.0);
}

TEST_CASE("remark2 forcing follows its closed form") {
  SimConfig cfg;
  cfg.resolution = 32;
  cfg.dt = 2e-3;
  cfg.t_end = 0.5;
  cfg.forcing.kind = ForcingKind::remark2;
  const auto forcing = make_forcing(cfg.forcing, cfg.grid(), cfg.eta);
  const auto o = ForcedOracle::with_tilde_t1({4, 4}, cfg.eta, cfg.grid());
  TrajectoryRecorder rec;
  const auto fin = simulate(cfg, {SpectralField2D(cfg.grid()), make_taylor({4, 4}, 1.0, cfg.grid()), 0.0},
                            forcing.get(), rec);
  CHECK(l2_norm(fin.u) < 1e-8);
  CHECK(l2_norm(fin.b - o.exact_b(0.5)) < 1e-6 * l2_norm(fin.b));
}

TEST_CASE("stability envelope shape") {
  StabilityBound b{0.45, 3, 1e-3, std::sqrt(32.0), 1.0};
  CHECK(stability_envelope(b, 0.0) == doctest::Approx(1e-6 * std::pow(32.0, 3)).epsilon(1e-14));
  const double ratio = stability_envelope(b, 2.5) / stability_envelope(b, 1.0);
  CHECK(ratio == doctest::Approx(std::exp(-2 * 0.45 * 1.5)).epsilon(1e-14));
  StabilityBound b2 = b;
  b2.N *= 2;
  CHECK(stability_envelope(b2, 0.7) / stability_envelope(b, 0.7) == doctest::Approx(64.0).epsilon(1e-14));
  CHECK(default_sigma(0.5, 0.7) == doctest::Approx(0.45));
}

TEST_CASE("Duhamel envelopes") {
  const double delta = 1e-3, N = std::sqrt(32.0);
  const auto [lh0, lm0] = duhamel_envelopes(delta, N, 3, 0.5, 0.45, 0.0);
  CHECK(lm0 == doctest::Approx(delta / (N * N) + delta * std::pow(N, 4)).epsilon(1e-14));
  CHECK(lh0 == doctest::Approx(delta * delta * std::pow(N, 6)).epsilon(1e-14));
  const auto [lh_inf, lm_inf] = duhamel_envelopes(delta, N, 3, 0.5, 0.45, 100.0);
  CHECK(lm_inf == doctest::Approx(delta / (N * N)).epsilon(1e-14));
  const auto half = duhamel_envelopes(delta / 2, N, 3, 0.5, 0.45, 1.0);
  const auto full = duhamel_envelopes(delta, N, 3, 0.5, 0.45, 1.0);
  CHECK(half.first == doctest::Approx(full.first / 4).epsilon(1e-14));
  (void)lh_inf;
}

TEST_CASE("remark2 bound and exact error") {
  const double N = std::sqrt(32.0);
  CHECK(remark2_error_bound(N, 3, 0.5, 1e4) == 0.0);
  double prev = remark2_error_bound(N, 3, 0.5, 0.1);
  for (double T = 0.2; T < 10.0; T += 0.3) {
    const double v = remark2_error_bound(N, 3, 0.5, T);
    CHECK(v < prev);
    prev = v;
  }
  CHECK(remark2_error_bound(N, 3, 1.0, 1.0) == doctest::Approx(std::pow(N, 3) * std::exp(-32.0) + std::exp(-1.0)));

  // exact error: the two summands live on disjoint modes, so the H^r norms add in quadrature
  const TorusGrid grid(32);
  for (double eta : {0.25, 1.0})
    for (double T : {0.5, 2.0}) {
      const double a = eta * std::exp(-eta * 32 * T) * std::pow(33.0, 1.5) * N * pi;
      const double b = std::exp(-eta * T) * std::pow(2.0, 1.5) * std::sqrt(2.5) * pi;
      CHECK(remark2_exact_error({4, 4}, 3, eta, T, grid) == doctest::Approx(std::hypot(a, b)).epsilon(1e-13));
    }
}
