#pragma once

#include <vector>

#include "mhd/field.hpp"

namespace mhd::kernels {

/// True when the mode survives the 2/3 rule: 3 max(|k1|, |k2|) < M.
bool dealias_keep(const TorusGrid& grid, int i1, int i2);

/// Scratch buffers and per-grid tables reused across right-hand-side evaluations.
class Workspace {
 public:
  explicit Workspace(TorusGrid grid);
  const TorusGrid& grid() const noexcept { return grid_; }

  TorusGrid grid_;
  std::vector<double> k1, k2;        // wavenumber per flat index
  std::vector<unsigned char> keep;   // 2/3-rule mask per flat index
  std::vector<Complex> spec[4];      // spectral scratch
  std::vector<Complex> phys[4];      // physical scratch
};

/// Nonlinear MHD tendencies in divergence form.
///
///   du = P[-div(u(x)u - b(x)b)],  db = curl-form of (b.grad)u - (u.grad)b
///
/// computed pseudo-spectrally with 8 transforms. Inputs are masked by the
/// 2/3 rule when `dealias` is set, and so are the outputs. Both outputs are
/// divergence-free with zero mean and zero Nyquist band. Elementwise loops
/// run under OpenMP.
void nonlinear_rhs(const VectorSpectrum& u, const VectorSpectrum& b, bool dealias, VectorSpectrum& du,
                   VectorSpectrum& db, Workspace& ws);

/// out = a + s * x, elementwise over both components.
void axpy(const VectorSpectrum& a, double s, const VectorSpectrum& x, VectorSpectrum& out);
/// x *= factor (real per-mode factor), both components.
void scale_modes(VectorSpectrum& x, const std::vector<double>& factor);
/// out = factor * (a + s * x).
void scaled_axpy(const std::vector<double>& factor, const VectorSpectrum& a, double s,
                 const VectorSpectrum& x, VectorSpectrum& out);
/// e^{-coef |k|^2 t} per flat index.
std::vector<double> heat_factor(const TorusGrid& grid, double coef, double t);
/// True when every coefficient is finite.
bool all_finite(const VectorSpectrum& x);
/// max over grid points of |u|_inf.
double max_grid_speed(const VectorSpectrum& u, Workspace& ws);

}  // namespace mhd::kernels
