#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mhd/field.hpp"
#include "mhd/kernels.hpp"
#include "mhd/signature.hpp"

namespace mhd {

struct MHDState {
  SpectralField2D u;
  SpectralField2D b;
  double t = 0.0;

  static MHDState zero(const TorusGrid& grid) { return {SpectralField2D(grid), SpectralField2D(grid), 0.0}; }
  const TorusGrid& grid() const noexcept { return u.grid(); }
};

enum class ForcingKind { none, theorem2, remark2, custom };

/// Constant-in-time Taylor forcing term used by ForcingKind::custom.
struct TaylorForce {
  enum class Target { velocity, magnetic };
  Target target = Target::magnetic;
  bool tilde_t1 = false;  // use (sin y, 1/2 sin x) instead of T_nm
  TaylorSpec spec{1, 1};
  double amplitude = 1.0;
};

struct ForcingSpec {
  ForcingKind kind = ForcingKind::none;
  TaylorSpec nm{4, 4};  // high mode (initial field) for theorem2 / remark2
  TaylorSpec n2{1, 1};  // low mode driving the field for theorem2
  std::vector<TaylorForce> custom;
};

struct SimConfig {
  double nu = 0.5;
  double eta = 0.5;
  int resolution = 128;
  double dt = 1e-3;
  double t_end = 1.0;
  ForcingSpec forcing;
  bool dealias = true;
  int output_cadence = 100;  // steps between diagnostics/snapshots
  int diagnostics_rmax = 3;

  TorusGrid grid() const { return TorusGrid(resolution); }
  /// Throws ConfigError on dt <= 0, t_end < 0, negative coefficients, cadence < 1.
  void validate() const;
};

/// Time-dependent forces (f1 on the velocity, f2 on the magnetic field), already divergence-free.
class Forcing {
 public:
  virtual ~Forcing() = default;
  virtual void evaluate(double t, VectorSpectrum& fu, VectorSpectrum& fb) const = 0;
};

/// Builds the forcing described by `spec`; returns nullptr for ForcingKind::none.
std::unique_ptr<Forcing> make_forcing(const ForcingSpec& spec, const TorusGrid& grid, double eta);

struct DiagnosticsRecord {
  double t = 0.0;
  double energy_u = 0.0;  // ||u||^2
  double energy_b = 0.0;  // ||b||^2
  double cross_helicity = 0.0;
  std::vector<double> sobolev_u;  // r = 0..r_max
  std::vector<double> sobolev_b;
  std::optional<TopologySignature> signature;

  friend bool operator==(const DiagnosticsRecord&, const DiagnosticsRecord&) = default;
};

DiagnosticsRecord make_diagnostics(const MHDState& s, int r_max);

/// Receives diagnostics and snapshots from `simulate` at the output cadence.
class DiagnosticSink {
 public:
  virtual ~DiagnosticSink() = default;
  virtual void record(const DiagnosticsRecord&) {}
  virtual void snapshot(const MHDState&) {}
};

/// Keeps every emitted record and snapshot in memory.
class TrajectoryRecorder : public DiagnosticSink {
 public:
  void record(const DiagnosticsRecord& r) override { records.push_back(r); }
  void snapshot(const MHDState& s) override { states.push_back(s); }
  std::vector<DiagnosticsRecord> records;
  std::vector<MHDState> states;
};

/// Integrating-factor RK4 stepper. Diffusion is applied exactly through
/// e^{-nu|k|^2 t} and e^{-eta|k|^2 t}; RK4 advances nonlinearity plus forcing,
/// with forces evaluated at the stage times. Owns its scratch space, so one
/// stepper must not be shared between threads.
class Stepper {
 public:
  Stepper(const SimConfig& cfg, const Forcing* forcing);
  /// Advances `state` by `dt` in place. Throws BlowUpError on non-finite output.
  void advance(MHDState& state, double dt);
  /// Projected nonlinear tendencies plus forcing at time t.
  void tendency(const VectorSpectrum& u, const VectorSpectrum& b, double t, VectorSpectrum& du,
                VectorSpectrum& db);

 private:
  void prepare_factors(double dt);

  SimConfig cfg_;
  TorusGrid grid_;
  const Forcing* forcing_;
  kernels::Workspace ws_;
  double factor_dt_ = -1.0;
  std::vector<double> eu_half_, eu_full_, eb_half_, eb_full_;
  VectorSpectrum fu_, fb_;
};

/// Projected nonlinear tendencies (no diffusion, no forcing).
void nonlinear_rhs(const MHDState& s, bool dealias, SpectralField2D& du, SpectralField2D& db);

/// One integrating-factor RK4 step of size cfg.dt.
MHDState step(const MHDState& state, const SimConfig& cfg, const Forcing* forcing = nullptr);

/// Advances to cfg.t_end, shortening the last step to land on it exactly.
/// Records and snapshots go to `sink` at t = 0, every output_cadence steps and at t_end.
/// On blow-up the last good state is flushed to the sink before rethrowing.
MHDState simulate(const SimConfig& cfg, MHDState initial, const Forcing* forcing, DiagnosticSink& sink);

/// Exact heat semigroup e^{eta t Laplacian}.
SpectralField2D heat_propagate(const SpectralField2D& f, double eta, double t);

/// D(t) = b(t) - e^{eta t Laplacian} b(0) for each snapshot; the first snapshot must be at t = 0.
std::vector<SpectralField2D> duhamel_remainder(const std::vector<MHDState>& trajectory, double eta);

/// Total pressure solving -Laplacian P = div((u.grad)u - (b.grad)b), zero mean.
Spectrum pressure(const MHDState& s, bool dealias = true);

}  // namespace mhd
