#include "mhd/solver.hpp"

#include <cmath>
#include <iostream>
#include <string>

#include "mhd/errors.hpp"
#include "mhd/reference.hpp"

namespace mhd {

void SimConfig::validate() const {
  if (!(dt > 0.0)) throw ConfigError("sim.dt must be positive");
  if (!(t_end >= 0.0)) throw ConfigError("sim.t_end must be nonnegative");
  if (!(nu >= 0.0)) throw ConfigError("sim.nu must be nonnegative");
  if (!(eta >= 0.0)) throw ConfigError("sim.eta must be nonnegative");
  if (output_cadence < 1) throw ConfigError("sim.output_cadence must be >= 1");
  if (diagnostics_rmax < 0 || diagnostics_rmax > 8) throw ConfigError("sim.diagnostics_rmax must lie in [0, 8]");
  (void)grid();
}

DiagnosticsRecord make_diagnostics(const MHDState& s, int r_max) {
  DiagnosticsRecord r;
  r.t = s.t;
  r.energy_u = inner_product(s.u, s.u);
  r.energy_b = inner_product(s.b, s.b);
  r.cross_helicity = inner_product(s.u, s.b);
  for (int k = 0; k <= r_max; ++k) {
    r.sobolev_u.push_back(sobolev_norm(s.u, k));
    r.sobolev_b.push_back(sobolev_norm(s.b, k));
  }
  return r;
}

Stepper::Stepper(const SimConfig& cfg, const Forcing* forcing)
    : cfg_(cfg), grid_(cfg.grid()), forcing_(forcing), ws_(grid_), fu_(grid_), fb_(grid_) {
  cfg_.validate();
}

void Stepper::prepare_factors(double dt) {
  if (dt == factor_dt_) return;
  eu_half_ = kernels::heat_factor(grid_, cfg_.nu, 0.5 * dt);
  eu_full_ = kernels::heat_factor(grid_, cfg_.nu, dt);
  eb_half_ = kernels::heat_factor(grid_, cfg_.eta, 0.5 * dt);
  eb_full_ = kernels::heat_factor(grid_, cfg_.eta, dt);
  factor_dt_ = dt;
}

void Stepper::tendency(const VectorSpectrum& u, const VectorSpectrum& b, double t, VectorSpectrum& du,
                       VectorSpectrum& db) {
  kernels::nonlinear_rhs(u, b, cfg_.dealias, du, db, ws_);
  if (forcing_) {
    forcing_->evaluate(t, fu_, fb_);
    kernels::axpy(du, 1.0, fu_, du);
    kernels::axpy(db, 1.0, fb_, db);
  }
}

void Stepper::advance(MHDState& state, double dt) {
  prepare_factors(dt);
  const double t = state.t;
  VectorSpectrum u(grid_, std::move(state.u).release());
  VectorSpectrum b(grid_, std::move(state.b).release());

  VectorSpectrum k1u(grid_), k1b(grid_), k2u(grid_), k2b(grid_), k3u(grid_), k3b(grid_), k4u(grid_),
      k4b(grid_), su(grid_), sb(grid_);

  tendency(u, b, t, k1u, k1b);

  kernels::scaled_axpy(eu_half_, u, 0.5 * dt, k1u, su);
  kernels::scaled_axpy(eb_half_, b, 0.5 * dt, k1b, sb);
  tendency(su, sb, t + 0.5 * dt, k2u, k2b);

  // stage 3: E_h x + dt/2 k2
  su = u;
  sb = b;
  kernels::scale_modes(su, eu_half_);
  kernels::scale_modes(sb, eb_half_);
  kernels::axpy(su, 0.5 * dt, k2u, su);
  kernels::axpy(sb, 0.5 * dt, k2b, sb);
  tendency(su, sb, t + 0.5 * dt, k3u, k3b);

  // stage 4: E x + dt E_h k3
  {
    VectorSpectrum hu = k3u, hb = k3b;
    kernels::scale_modes(hu, eu_half_);
    kernels::scale_modes(hb, eb_half_);
    su = u;
    sb = b;
    kernels::scale_modes(su, eu_full_);
    kernels::scale_modes(sb, eb_full_);
    kernels::axpy(su, dt, hu, su);
    kernels::axpy(sb, dt, hb, sb);
  }
  tendency(su, sb, t + dt, k4u, k4b);

  // x_{n+1} = E x + dt/6 (E k1 + 2 E_h (k2 + k3) + k4)
  auto combine = [&](VectorSpectrum& x, const VectorSpectrum& a1, const VectorSpectrum& a2,
                     const VectorSpectrum& a3, const VectorSpectrum& a4, const std::vector<double>& ef,
                     const std::vector<double>& eh) {
    const long n = static_cast<long>(grid_.size());
    for (int c = 0; c < 2; ++c) {
      Complex* px = x.c[c].data();
      const Complex *p1 = a1.c[c].data(), *p2 = a2.c[c].data(), *p3 = a3.c[c].data(), *p4 = a4.c[c].data();
#pragma omp parallel for schedule(static)
      for (long i = 0; i < n; ++i)
        px[i] = ef[i] * px[i] + dt / 6.0 * (ef[i] * p1[i] + 2.0 * eh[i] * (p2[i] + p3[i]) + p4[i]);
    }
  };
  combine(u, k1u, k2u, k3u, k4u, eu_full_, eu_half_);
  combine(b, k1b, k2b, k3b, k4b, eb_full_, eb_half_);

  for (auto* x : {&u, &b}) {
    leray_project_inplace(*x);
    for (auto& c : x->c) hermitian_symmetrize(c, grid_);
  }
  const bool finite = kernels::all_finite(u) && kernels::all_finite(b);
  state.u = SpectralField2D::adopt(grid_, std::move(u.c));
  state.b = SpectralField2D::adopt(grid_, std::move(b.c));
  state.t = t + dt;
  if (!finite) throw BlowUpError(state.t);
}

void nonlinear_rhs(const MHDState& s, bool dealias, SpectralField2D& du, SpectralField2D& db) {
  const auto& grid = s.grid();
  kernels::Workspace ws(grid);
  VectorSpectrum u(grid, s.u.components()), b(grid, s.b.components()), ou(grid), ob(grid);
  kernels::nonlinear_rhs(u, b, dealias, ou, ob, ws);
  du = SpectralField2D::adopt(grid, std::move(ou.c));
  db = SpectralField2D::adopt(grid, std::move(ob.c));
}

MHDState step(const MHDState& state, const SimConfig& cfg, const Forcing* forcing) {
  Stepper stepper(cfg, forcing);
  MHDState next = state;
  stepper.advance(next, cfg.dt);
  return next;
}

MHDState simulate(const SimConfig& cfg, MHDState initial, const Forcing* forcing, DiagnosticSink& sink) {
  cfg.validate();
  if (!(initial.grid() == cfg.grid())) throw ConfigError("initial state resolution does not match sim.resolution");
  Stepper stepper(cfg, forcing);
  kernels::Workspace ws(cfg.grid());
  MHDState state = std::move(initial);
  const double t0 = state.t;
  const double t_end = cfg.t_end;

  auto emit = [&](const MHDState& s) {
    sink.record(make_diagnostics(s, cfg.diagnostics_rmax));
    sink.snapshot(s);
  };
  bool cfl_warned = false;
  auto check_cfl = [&](const MHDState& s) {
    if (cfl_warned) return;
    VectorSpectrum u(s.grid(), s.u.components());
    const double speed = kernels::max_grid_speed(u, ws);
    const double courant = cfg.dt * speed * cfg.resolution / kTwoPi;
    if (courant >= 0.5) {
      std::cerr << "warning: CFL number " << courant << " >= 0.5 at t = " << s.t << "\n";
      cfl_warned = true;
    }
  };

  emit(state);
  if (t_end <= t0) return state;

  long n = 0;
  MHDState last_good = state;
  while (state.t < t_end) {
    const double next_nominal = t0 + static_cast<double>(n + 1) * cfg.dt;
    const bool last = next_nominal >= t_end - 1e-9 * cfg.dt;
    const double h = last ? t_end - state.t : next_nominal - state.t;
    try {
      stepper.advance(state, h);
    } catch (const BlowUpError&) {
      sink.snapshot(last_good);
      throw;
    }
    ++n;
    if (last) state.t = t_end;
    const bool cadence = (n % cfg.output_cadence) == 0;
    if (cadence || last) {
      check_cfl(state);
      emit(state);
    }
    if (cadence) last_good = state;
    if (last) break;
  }
  return state;
}

SpectralField2D heat_propagate(const SpectralField2D& f, double eta, double t) {
  if (t < 0.0) throw MisuseError("heat_propagate requires t >= 0");
  VectorSpectrum g(f.grid(), f.components());
  kernels::scale_modes(g, kernels::heat_factor(f.grid(), eta, t));
  return SpectralField2D::adopt(f.grid(), std::move(g.c));
}

std::vector<SpectralField2D> duhamel_remainder(const std::vector<MHDState>& trajectory, double eta) {
  if (trajectory.empty() || trajectory.front().t != 0.0)
    throw InputError("duhamel_remainder needs the b(0) snapshot at t = 0");
  const SpectralField2D& b0 = trajectory.front().b;
  std::vector<SpectralField2D> out;
  out.reserve(trajectory.size());
  for (const auto& s : trajectory) out.push_back(s.b - heat_propagate(b0, eta, s.t));
  return out;
}

Spectrum pressure(const MHDState& s, bool dealias) {
  const auto& grid = s.grid();
  const VectorSpectrum u(grid, s.u.components()), b(grid, s.b.components());
  const VectorSpectrum uu = reference::advection(u, u, dealias);
  const VectorSpectrum bb = reference::advection(b, b, dealias);
  const int m = grid.resolution();
  Spectrum p(grid.size());
  for (int i1 = 0; i1 < m; ++i1)
    for (int i2 = 0; i2 < m; ++i2) {
      if (i1 == 0 && i2 == 0) continue;
      const double k1 = grid.wavenumber(i1), k2 = grid.wavenumber(i2);
      const std::size_t at = grid.flat(i1, i2);
      const Complex div = Complex{0.0, 1.0} * (k1 * (uu.c[0][at] - bb.c[0][at]) + k2 * (uu.c[1][at] - bb.c[1][at]));
      p[at] = div / (k1 * k1 + k2 * k2);
    }
  return p;
}

}  // namespace mhd
