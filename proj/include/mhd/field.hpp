#pragma once

#include <array>
#include <utility>

#include "mhd/grid.hpp"

namespace mhd {

/// Taylor field T_nm = (m sin nx sin my, n cos nx cos my), eigenvalue n^2 + m^2 under -Laplacian.
struct TaylorSpec {
  int n = 1;
  int m = 1;
  int eigenvalue() const noexcept { return n * n + m * m; }
  friend bool operator==(const TaylorSpec&, const TaylorSpec&) = default;
};

/// Two-component spectrum with no invariants attached (input to leray_project).
struct VectorSpectrum {
  TorusGrid grid;
  std::array<Spectrum, 2> c;

  explicit VectorSpectrum(TorusGrid g) : grid(g), c{Spectrum(g.size()), Spectrum(g.size())} {}
  VectorSpectrum(TorusGrid g, std::array<Spectrum, 2> coeffs) : grid(g), c(std::move(coeffs)) {}
};

/// Real, divergence-free, zero-average vector field on the torus, stored as
/// full complex Fourier coefficients f(x) = sum_k c(k) e^{i k.x}.
///
/// Nyquist rows and columns are always zero. Values are immutable once built;
/// arithmetic returns new fields.
class SpectralField2D {
 public:
  /// Zero field.
  explicit SpectralField2D(TorusGrid grid);

  /// Checks Hermitian symmetry, zero mean, vanishing Nyquist band and
  /// divergence (relative tolerance) and throws InputError on violation.
  static SpectralField2D from_coefficients(TorusGrid grid, std::array<Spectrum, 2> coeffs,
                                           double tol = 1e-10);
  /// Takes ownership without validation; the caller guarantees the invariants.
  static SpectralField2D adopt(TorusGrid grid, std::array<Spectrum, 2> coeffs);

  const TorusGrid& grid() const noexcept { return grid_; }
  int resolution() const noexcept { return grid_.resolution(); }
  const Spectrum& component(int i) const noexcept { return c_[i]; }
  const std::array<Spectrum, 2>& components() const noexcept { return c_; }
  /// Coefficient of component `comp` at wavenumber (k1, k2).
  Complex coeff(int comp, int k1, int k2) const;

  std::array<Spectrum, 2> release() && { return std::move(c_); }

  SpectralField2D operator+(const SpectralField2D& o) const;
  SpectralField2D operator-(const SpectralField2D& o) const;
  SpectralField2D operator*(double s) const;
  friend SpectralField2D operator*(double s, const SpectralField2D& f) { return f * s; }
  /// Bitwise coefficient equality.
  bool identical(const SpectralField2D& o) const;

 private:
  SpectralField2D(TorusGrid grid, std::array<Spectrum, 2> coeffs);
  TorusGrid grid_;
  std::array<Spectrum, 2> c_;
};

/// Scalar stream function psi with v = grad-perp psi = (d_y psi, -d_x psi).
struct StreamFunction {
  TorusGrid grid;
  Spectrum coeffs;
};

/// Throws ConfigError unless 1 <= n, m < M/2.
void require_resolvable(const TaylorSpec& spec, const TorusGrid& grid);

SpectralField2D make_taylor(const TaylorSpec& spec, double amplitude, const TorusGrid& grid);
/// (sin y, 1/2 sin x), eigenvalue 1.
SpectralField2D make_tilde_t1(const TorusGrid& grid, double amplitude = 1.0);

/// Exact trigonometric sum at an arbitrary point.
Vec2 eval_field(const SpectralField2D& f, Point x);
/// Spectral derivative evaluated at x; J[i][j] = d f_i / d x_j.
Mat2 jacobian(const SpectralField2D& f, Point x);

SpectralField2D laplacian(const SpectralField2D& f);
/// Applies -|k|^2 to a raw spectrum.
VectorSpectrum laplacian(const VectorSpectrum& g);
/// max_k |k . f(k)| over all modes.
double max_divergence(const VectorSpectrum& g);

/// Unnormalized L2 inner product over [0, 2pi)^2.
double inner_product(const SpectralField2D& f, const SpectralField2D& g);
double l2_norm(const SpectralField2D& f);
/// (sum_k (1 + |k|^2)^r |f_hat(k)|^2)^{1/2} with f_hat normalized so r = 0 is the L2 norm.
double sobolev_norm(const SpectralField2D& f, int r);
double sobolev_norm(const VectorSpectrum& g, int r);

/// sup |f| + sup |grad f| (max norms) on an (oversample*M)^2 grid.
double c1_norm(const SpectralField2D& f, int oversample = 4);

/// Per-mode projection g - k (k.g)/|k|^2 onto divergence-free fields; mean and Nyquist band zeroed.
SpectralField2D leray_project(const VectorSpectrum& g);
/// In-place variant used by the time stepper.
void leray_project_inplace(VectorSpectrum& g);
/// Replaces each coefficient pair by the Hermitian average, enforcing a real field.
void hermitian_symmetrize(Spectrum& s, const TorusGrid& grid);

StreamFunction stream_function(const SpectralField2D& f);
SpectralField2D perp_gradient(const StreamFunction& psi);
double eval_stream(const StreamFunction& psi, Point x);

/// Physical-space samples of both components (complex, for reality checks).
std::array<std::vector<Complex>, 2> to_grid(const SpectralField2D& f);
/// Raw spectrum of physical samples.
VectorSpectrum from_grid(const TorusGrid& grid, const std::array<std::vector<Complex>, 2>& samples);

}  // namespace mhd
