#include "mhd/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace mhd {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

Fft2D::Fft2D(int n) : n_(n) {
  std::vector<Complex> scratch_in(static_cast<std::size_t>(n) * n), scratch_out(scratch_in.size());
  auto* in = reinterpret_cast<fftw_complex*>(scratch_in.data());
  auto* out = reinterpret_cast<fftw_complex*>(scratch_out.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  fwd_ = fftw_plan_dft_2d(n, n, in, out, FFTW_FORWARD, flags);
  inv_ = fftw_plan_dft_2d(n, n, in, out, FFTW_BACKWARD, flags);
}

Fft2D::~Fft2D() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(inv_));
}

std::shared_ptr<const Fft2D> Fft2D::get(int n) {
  std::lock_guard lock(planner_mutex());
  static std::map<int, std::shared_ptr<const Fft2D>> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::shared_ptr<const Fft2D> plan(new Fft2D(n));
  cache.emplace(n, plan);
  return plan;
}

void Fft2D::forward(const Complex* in, Complex* out) const {
  fftw_execute_dft(static_cast<fftw_plan>(fwd_),
                   reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

void Fft2D::inverse(const Complex* in, Complex* out) const {
  fftw_execute_dft(static_cast<fftw_plan>(inv_),
                   reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

std::vector<Complex> spectrum_to_grid(const Spectrum& coeffs, const TorusGrid& grid, int s) {
  const int m = grid.resolution();
  std::vector<Complex> padded(static_cast<std::size_t>(s) * s);
  if (s == m) {
    padded = coeffs;
  } else {
    for (int i1 = 0; i1 < m; ++i1) {
      if (grid.is_nyquist(i1)) continue;
      const int j1 = (grid.wavenumber(i1) + s) % s;
      for (int i2 = 0; i2 < m; ++i2) {
        if (grid.is_nyquist(i2)) continue;
        const int j2 = (grid.wavenumber(i2) + s) % s;
        padded[static_cast<std::size_t>(j1) * s + j2] = coeffs[grid.flat(i1, i2)];
      }
    }
  }
  std::vector<Complex> out(padded.size());
  Fft2D::get(s)->inverse(padded.data(), out.data());
  return out;
}

Spectrum grid_to_spectrum(const std::vector<Complex>& samples, const TorusGrid& grid) {
  Spectrum out(grid.size());
  Fft2D::get(grid.resolution())->forward(samples.data(), out.data());
  const double scale = 1.0 / static_cast<double>(grid.size());
  for (auto& c : out) c *= scale;
  return out;
}

}  // namespace mhd
