#pragma once

#include <memory>

#include "mhd/grid.hpp"

namespace mhd {

/// Cached FFTW plans for an n x n complex transform.
///
/// Plans are created with FFTW_ESTIMATE so that the chosen algorithm, and
/// therefore every rounding pattern, is identical across runs. Execution uses
/// the new-array interface and is safe to call concurrently.
class Fft2D {
 public:
  /// Shared plan for size n; plan creation is serialized internally.
  static std::shared_ptr<const Fft2D> get(int n);

  int size() const noexcept { return n_; }
  /// out = sum_x in(x) e^{-i k.x}; unnormalized.
  void forward(const Complex* in, Complex* out) const;
  /// out = sum_k in(k) e^{+i k.x}; unnormalized.
  void inverse(const Complex* in, Complex* out) const;

  ~Fft2D();
  Fft2D(const Fft2D&) = delete;
  Fft2D& operator=(const Fft2D&) = delete;

 private:
  explicit Fft2D(int n);
  int n_;
  void* fwd_ = nullptr;
  void* inv_ = nullptr;
};

/// Physical samples on an s x s grid (s >= M) of the spectrum, by zero padding.
/// When s > M the Nyquist row and column of the source are dropped.
std::vector<Complex> spectrum_to_grid(const Spectrum& coeffs, const TorusGrid& grid, int s);
/// Spectral coefficients of grid samples (normalized by M^2).
Spectrum grid_to_spectrum(const std::vector<Complex>& samples, const TorusGrid& grid);

}  // namespace mhd
