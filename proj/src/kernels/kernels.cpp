#include "mhd/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "mhd/fft.hpp"

namespace mhd::kernels {

namespace {
constexpr Complex kI{0.0, 1.0};
}

bool dealias_keep(const TorusGrid& grid, int i1, int i2) {
  const int a = std::abs(grid.wavenumber(i1)), b = std::abs(grid.wavenumber(i2));
  return 3 * std::max(a, b) < grid.resolution();
}

Workspace::Workspace(TorusGrid grid) : grid_(grid) {
  const int m = grid.resolution();
  k1.resize(grid.size());
  k2.resize(grid.size());
  keep.resize(grid.size());
  for (int i1 = 0; i1 < m; ++i1)
    for (int i2 = 0; i2 < m; ++i2) {
      const std::size_t at = grid.flat(i1, i2);
      k1[at] = grid.wavenumber(i1);
      k2[at] = grid.wavenumber(i2);
      keep[at] = dealias_keep(grid, i1, i2) && !grid.is_nyquist(i1) && !grid.is_nyquist(i2);
    }
  for (auto& s : spec) s.resize(grid.size());
  for (auto& p : phys) p.resize(grid.size());
}

void nonlinear_rhs(const VectorSpectrum& u, const VectorSpectrum& b, bool dealias, VectorSpectrum& du,
                   VectorSpectrum& db, Workspace& ws) {
  const auto& grid = ws.grid();
  const long n = static_cast<long>(grid.size());
  const auto fft = Fft2D::get(grid.resolution());
  const Spectrum* src[4] = {&u.c[0], &u.c[1], &b.c[0], &b.c[1]};

  for (int f = 0; f < 4; ++f) {
    const Spectrum& in = *src[f];
    auto& s = ws.spec[f];
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) s[i] = (!dealias || ws.keep[i]) ? in[i] : Complex{};
    fft->inverse(s.data(), ws.phys[f].data());
  }

  // phys = u1, u2, b1, b2  ->  S11, S12, S22, E (in place)
  auto& p0 = ws.phys[0];
  auto& p1 = ws.phys[1];
  auto& p2 = ws.phys[2];
  auto& p3 = ws.phys[3];
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) {
    const double u1 = p0[i].real(), u2 = p1[i].real(), b1 = p2[i].real(), b2 = p3[i].real();
    p0[i] = u1 * u1 - b1 * b1;
    p1[i] = u1 * u2 - b1 * b2;
    p2[i] = u2 * u2 - b2 * b2;
    p3[i] = u1 * b2 - u2 * b1;
  }

  for (int f = 0; f < 4; ++f) fft->forward(ws.phys[f].data(), ws.spec[f].data());

  const double norm = 1.0 / static_cast<double>(n);
  const int m = grid.resolution();
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) {
    const int i1 = static_cast<int>(i / m), i2 = static_cast<int>(i % m);
    const bool zero = (i == 0) || grid.is_nyquist(i1) || grid.is_nyquist(i2) || (dealias && !ws.keep[i]);
    if (zero) {
      du.c[0][i] = du.c[1][i] = db.c[0][i] = db.c[1][i] = Complex{};
      continue;
    }
    const double k1 = ws.k1[i], k2 = ws.k2[i];
    const Complex s11 = ws.spec[0][i] * norm, s12 = ws.spec[1][i] * norm, s22 = ws.spec[2][i] * norm;
    const Complex e = ws.spec[3][i] * norm;
    Complex a1 = -kI * (k1 * s11 + k2 * s12);
    Complex a2 = -kI * (k1 * s12 + k2 * s22);
    const Complex proj = (k1 * a1 + k2 * a2) / (k1 * k1 + k2 * k2);
    du.c[0][i] = a1 - k1 * proj;
    du.c[1][i] = a2 - k2 * proj;
    db.c[0][i] = kI * k2 * e;
    db.c[1][i] = -kI * k1 * e;
  }
}

void axpy(const VectorSpectrum& a, double s, const VectorSpectrum& x, VectorSpectrum& out) {
  const long n = static_cast<long>(a.grid.size());
  for (int c = 0; c < 2; ++c) {
    const Complex* pa = a.c[c].data();
    const Complex* px = x.c[c].data();
    Complex* po = out.c[c].data();
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) po[i] = pa[i] + s * px[i];
  }
}

void scale_modes(VectorSpectrum& x, const std::vector<double>& factor) {
  const long n = static_cast<long>(x.grid.size());
  for (int c = 0; c < 2; ++c) {
    Complex* p = x.c[c].data();
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) p[i] *= factor[i];
  }
}

void scaled_axpy(const std::vector<double>& factor, const VectorSpectrum& a, double s,
                 const VectorSpectrum& x, VectorSpectrum& out) {
  const long n = static_cast<long>(a.grid.size());
  for (int c = 0; c < 2; ++c) {
    const Complex* pa = a.c[c].data();
    const Complex* px = x.c[c].data();
    Complex* po = out.c[c].data();
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) po[i] = factor[i] * (pa[i] + s * px[i]);
  }
}

std::vector<double> heat_factor(const TorusGrid& grid, double coef, double t) {
  const int m = grid.resolution();
  std::vector<double> f(grid.size());
#pragma omp parallel for schedule(static)
  for (int i1 = 0; i1 < m; ++i1) {
    const double k1 = grid.wavenumber(i1);
    for (int i2 = 0; i2 < m; ++i2) {
      const double k2 = grid.wavenumber(i2);
      f[grid.flat(i1, i2)] = std::exp(-coef * (k1 * k1 + k2 * k2) * t);
    }
  }
  return f;
}

bool all_finite(const VectorSpectrum& x) {
  bool ok = true;
  const long n = static_cast<long>(x.grid.size());
  for (int c = 0; c < 2; ++c) {
    const Complex* p = x.c[c].data();
#pragma omp parallel for reduction(&& : ok) schedule(static)
    for (long i = 0; i < n; ++i) ok = ok && std::isfinite(p[i].real()) && std::isfinite(p[i].imag());
  }
  return ok;
}

double max_grid_speed(const VectorSpectrum& u, Workspace& ws) {
  const auto fft = Fft2D::get(ws.grid().resolution());
  const long n = static_cast<long>(ws.grid().size());
  double mx = 0.0;
  for (int c = 0; c < 2; ++c) {
    fft->inverse(u.c[c].data(), ws.phys[c].data());
    const Complex* p = ws.phys[c].data();
#pragma omp parallel for reduction(max : mx) schedule(static)
    for (long i = 0; i < n; ++i) mx = std::max(mx, std::abs(p[i].real()));
  }
  return mx;
}

}  // namespace mhd::kernels
