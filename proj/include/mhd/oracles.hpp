#pragma once

#include <memory>
#include <mutex>
#include <utility>

#include "mhd/field.hpp"
#include "mhd/solver.hpp"

namespace mhd {

/// Unforced exact solution (0, amplitude e^{-eta N^2 t} T_nm).
struct DecayingTaylorOracle {
  TaylorSpec spec{4, 4};
  double eta = 0.5;
  double amplitude = 1.0;
};

MHDState decaying_taylor(const DecayingTaylorOracle& oracle, const TorusGrid& grid, double t);

/// Max over both equations of the L2 norm of the term-by-term residual of the
/// unforced MHD system for the decaying Taylor solution at time t, with the
/// time derivative taken analytically.
double decaying_taylor_residual(const DecayingTaylorOracle& oracle, const TorusGrid& grid, double t, double nu);

/// Explicit forced solution u = 0, b(t) = c_hi(t) F_hi + c_lo(t) F_lo where
/// F_hi = T_nm, F_lo is a Taylor field with eigenvalue lambda_lo < N^2 used as
/// the magnetic forcing, c_hi = e^{-eta N^2 t} and
/// c_lo = (1 - e^{-eta lambda_lo t}) / (eta lambda_lo).
///
/// The velocity force cancels the non-gradient part of the Lorentz force:
/// f1(t) = -c_hi(t) c_lo(t) P[(F_hi.grad)F_lo + (F_lo.grad)F_hi].
class ForcedOracle {
 public:
  /// Low field T_{n2 m2} (forcing kind theorem2). Throws ConfigError unless N2^2 < N^2.
  ForcedOracle(TaylorSpec nm, TaylorSpec n2, double eta, TorusGrid grid);
  /// Low field (sin y, 1/2 sin x) with eigenvalue 1 (forcing kind remark2).
  static ForcedOracle with_tilde_t1(TaylorSpec nm, double eta, TorusGrid grid);

  double coeff_high(double t) const;
  double coeff_low(double t) const;
  double eta() const noexcept { return eta_; }
  const TaylorSpec& spec_high() const noexcept { return nm_; }
  int eigenvalue_low() const noexcept { return lambda_lo_; }

  SpectralField2D exact_b(double t) const;
  /// d/dt of exact_b, from the closed form.
  SpectralField2D exact_b_rate(double t) const;
  SpectralField2D f1(double t) const;
  const SpectralField2D& f2() const noexcept { return low_; }
  const SpectralField2D& high() const noexcept { return high_; }
  /// P[(F_hi.grad)F_lo + (F_lo.grad)F_hi], computed once on first use.
  const SpectralField2D& cross_term() const;

 private:
  ForcedOracle(TaylorSpec nm, SpectralField2D low, int lambda_lo, double eta, TorusGrid grid);

  TaylorSpec nm_;
  double eta_;
  int lambda_lo_;
  TorusGrid grid_;
  SpectralField2D high_, low_;
  struct Cache {
    std::once_flag once;
    std::unique_ptr<SpectralField2D> cross;
  };
  std::shared_ptr<Cache> cache_;
};

SpectralField2D forced_exact_b(const ForcedOracle& oracle, double t);
SpectralField2D forcing_f1(const ForcedOracle& oracle, double t);

struct StabilityBound {
  double sigma = 0.45;
  int r = 3;
  double delta = 1e-3;
  double N = 1.0;
  double gamma = 1.0;  // carried for reporting; its exponential factor is not evaluated
};

/// sigma strictly below min(nu, eta); default 0.9 min(nu, eta).
double default_sigma(double nu, double eta);

/// delta^2 N^{2r} e^{-2 sigma t}: shape of the H^r stability bound with the
/// unquantified constant factor omitted.
double stability_envelope(const StabilityBound& bound, double t);

/// Shapes of the Duhamel-term bounds with all constants set to 1:
/// first = delta^2 N^{r+3} e^{-sigma t}, second = delta N^{-2} + delta N^{r+1} e^{-eta N^2 t / 2}.
std::pair<double, double> duhamel_envelopes(double delta, double N, int r, double eta, double sigma, double t);

/// eta (N^r e^{-eta N^2 T} + e^{-eta T}).
double remark2_error_bound(double N, int r, double eta, double T);

/// ||eta b(T) - (sin y, 1/2 sin x)||_{H^r} for the closed-form remark2 solution started from T_nm.
double remark2_exact_error(const TaylorSpec& nm, int r, double eta, double T, const TorusGrid& grid);

}  // namespace mhd
