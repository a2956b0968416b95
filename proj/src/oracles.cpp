#include "mhd/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mhd/errors.hpp"
#include "mhd/reference.hpp"

namespace mhd {

MHDState decaying_taylor(const DecayingTaylorOracle& oracle, const TorusGrid& grid, double t) {
  if (t < 0.0) throw MisuseError("decaying_taylor requires t >= 0");
  const double decay = std::exp(-oracle.eta * oracle.spec.eigenvalue() * t);
  return {SpectralField2D(grid), make_taylor(oracle.spec, oracle.amplitude * decay, grid), t};
}

double decaying_taylor_residual(const DecayingTaylorOracle& oracle, const TorusGrid& grid, double t, double nu) {
  const MHDState s = decaying_taylor(oracle, grid, t);
  const VectorSpectrum u(grid, s.u.components()), b(grid, s.b.components());
  const double n2 = oracle.spec.eigenvalue();

  // velocity: du/dt + P[(u.grad)u - (b.grad)b] - nu Lap u, with du/dt = 0
  VectorSpectrum ru = reference::advection(u, u, false);
  const VectorSpectrum bb = reference::advection(b, b, false);
  const VectorSpectrum lap_u = laplacian(u);
  for (int c = 0; c < 2; ++c)
    for (std::size_t i = 0; i < grid.size(); ++i) ru.c[c][i] += -bb.c[c][i] - nu * lap_u.c[c][i];
  reference::leray_project(ru);

  // magnetic: db/dt - eta Lap b + (u.grad)b - (b.grad)u, with db/dt = -eta N^2 b
  VectorSpectrum rb = reference::advection(u, b, false);
  const VectorSpectrum bu = reference::advection(b, u, false);
  const VectorSpectrum lap_b = laplacian(b);
  for (int c = 0; c < 2; ++c)
    for (std::size_t i = 0; i < grid.size(); ++i)
      rb.c[c][i] += -oracle.eta * n2 * b.c[c][i] - oracle.eta * lap_b.c[c][i] - bu.c[c][i];
  return std::max(sobolev_norm(ru, 0), sobolev_norm(rb, 0));
}

ForcedOracle::ForcedOracle(TaylorSpec nm, SpectralField2D low, int lambda_lo, double eta, TorusGrid grid)
    : nm_(nm),
      eta_(eta),
      lambda_lo_(lambda_lo),
      grid_(grid),
      high_(make_taylor(nm, 1.0, grid)),
      low_(std::move(low)),
      cache_(std::make_shared<Cache>()) {
  if (eta < 0.0) throw ConfigError("forced oracle needs eta >= 0");
  if (lambda_lo >= nm.eigenvalue())
    throw ConfigError("forced oracle needs the low eigenvalue " + std::to_string(lambda_lo) +
                      " below N^2 = " + std::to_string(nm.eigenvalue()));
}

ForcedOracle::ForcedOracle(TaylorSpec nm, TaylorSpec n2, double eta, TorusGrid grid)
    : ForcedOracle(nm, make_taylor(n2, 1.0, grid), n2.eigenvalue(), eta, grid) {}

ForcedOracle ForcedOracle::with_tilde_t1(TaylorSpec nm, double eta, TorusGrid grid) {
  return ForcedOracle(nm, make_tilde_t1(grid), 1, eta, grid);
}

double ForcedOracle::coeff_high(double t) const { return std::exp(-eta_ * nm_.eigenvalue() * t); }

double ForcedOracle::coeff_low(double t) const {
  const double rate = eta_ * lambda_lo_;
  if (rate == 0.0) return t;
  return -std::expm1(-rate * t) / rate;
}

SpectralField2D ForcedOracle::exact_b(double t) const {
  if (t < 0.0) throw MisuseError("forced oracle requires t >= 0");
  return high_ * coeff_high(t) + low_ * coeff_low(t);
}

SpectralField2D ForcedOracle::exact_b_rate(double t) const {
  const double d_high = -eta_ * nm_.eigenvalue() * coeff_high(t);
  const double d_low = std::exp(-eta_ * lambda_lo_ * t);
  return high_ * d_high + low_ * d_low;
}

const SpectralField2D& ForcedOracle::cross_term() const {
  std::call_once(cache_->once, [this] {
    const VectorSpectrum a(grid_, high_.components()), b(grid_, low_.components());
    VectorSpectrum ab = reference::advection(a, b, false);
    const VectorSpectrum ba = reference::advection(b, a, false);
    for (int c = 0; c < 2; ++c)
      for (std::size_t i = 0; i < grid_.size(); ++i) ab.c[c][i] += ba.c[c][i];
    reference::leray_project(ab);
    for (auto& c : ab.c) hermitian_symmetrize(c, grid_);
    cache_->cross = std::make_unique<SpectralField2D>(SpectralField2D::adopt(grid_, std::move(ab.c)));
  });
  return *cache_->cross;
}

SpectralField2D ForcedOracle::f1(double t) const {
  return cross_term() * (-coeff_high(t) * coeff_low(t));
}

SpectralField2D forced_exact_b(const ForcedOracle& oracle, double t) { return oracle.exact_b(t); }
SpectralField2D forcing_f1(const ForcedOracle& oracle, double t) { return oracle.f1(t); }

double default_sigma(double nu, double eta) { return 0.9 * std::min(nu, eta); }

double stability_envelope(const StabilityBound& bound, double t) {
  return bound.delta * bound.delta * std::pow(bound.N, 2 * bound.r) * std::exp(-2.0 * bound.sigma * t);
}

std::pair<double, double> duhamel_envelopes(double delta, double N, int r, double eta, double sigma, double t) {
  const double lh = delta * delta * std::pow(N, r + 3) * std::exp(-sigma * t);
  const double lm = delta / (N * N) + delta * std::pow(N, r + 1) * std::exp(-eta * N * N * t / 2.0);
  return {lh, lm};
}

double remark2_error_bound(double N, int r, double eta, double T) {
  return eta * (std::pow(N, r) * std::exp(-eta * N * N * T) + std::exp(-eta * T));
}

double remark2_exact_error(const TaylorSpec& nm, int r, double eta, double T, const TorusGrid& grid) {
  const ForcedOracle oracle = ForcedOracle::with_tilde_t1(nm, eta, grid);
  const SpectralField2D diff = oracle.exact_b(T) * eta - make_tilde_t1(grid);
  return sobolev_norm(diff, r);
}

}  // namespace mhd
