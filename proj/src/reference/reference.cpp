#include "mhd/reference.hpp"

#include <array>

#include "mhd/fft.hpp"
#include "mhd/kernels.hpp"

namespace mhd::reference {

namespace {

constexpr Complex kI{0.0, 1.0};

Spectrum masked(const Spectrum& s, const TorusGrid& grid, bool dealias) {
  Spectrum out = s;
  const int m = grid.resolution();
  for (int i1 = 0; i1 < m; ++i1)
    for (int i2 = 0; i2 < m; ++i2)
      if (grid.is_nyquist(i1) || grid.is_nyquist(i2) || (dealias && !kernels::dealias_keep(grid, i1, i2)))
        out[grid.flat(i1, i2)] = Complex{};
  return out;
}

// Grid samples of a field component and of its two partial derivatives.
struct Sampled {
  std::vector<Complex> value, dx, dy;
};

Sampled sample(const Spectrum& s, const TorusGrid& grid) {
  const int m = grid.resolution();
  Spectrum sx(s.size()), sy(s.size());
  for (int i1 = 0; i1 < m; ++i1)
    for (int i2 = 0; i2 < m; ++i2) {
      const std::size_t at = grid.flat(i1, i2);
      sx[at] = kI * double(grid.wavenumber(i1)) * s[at];
      sy[at] = kI * double(grid.wavenumber(i2)) * s[at];
    }
  return {spectrum_to_grid(s, grid, m), spectrum_to_grid(sx, grid, m), spectrum_to_grid(sy, grid, m)};
}

VectorSpectrum transform_back(const TorusGrid& grid, std::array<std::vector<Complex>, 2> phys, bool dealias) {
  VectorSpectrum out = from_grid(grid, phys);
  for (auto& c : out.c) c = masked(c, grid, dealias);
  return out;
}

}  // namespace

VectorSpectrum advection(const VectorSpectrum& a, const VectorSpectrum& b, bool dealias) {
  const auto& grid = a.grid;
  std::array<Sampled, 2> sa, sb;
  for (int c = 0; c < 2; ++c) {
    sa[c] = sample(masked(a.c[c], grid, dealias), grid);
    sb[c] = sample(masked(b.c[c], grid, dealias), grid);
  }
  std::array<std::vector<Complex>, 2> out{std::vector<Complex>(grid.size()), std::vector<Complex>(grid.size())};
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const double a1 = sa[0].value[p].real(), a2 = sa[1].value[p].real();
    for (int c = 0; c < 2; ++c) out[c][p] = a1 * sb[c].dx[p].real() + a2 * sb[c].dy[p].real();
  }
  return transform_back(grid, std::move(out), dealias);
}

void leray_project(VectorSpectrum& g) {
  const auto& grid = g.grid;
  const int m = grid.resolution();
  for (int i1 = 0; i1 < m; ++i1) {
    for (int i2 = 0; i2 < m; ++i2) {
      const std::size_t at = grid.flat(i1, i2);
      if ((i1 == 0 && i2 == 0) || grid.is_nyquist(i1) || grid.is_nyquist(i2)) {
        g.c[0][at] = g.c[1][at] = Complex{};
        continue;
      }
      const double k1 = grid.wavenumber(i1), k2 = grid.wavenumber(i2);
      const Complex kg = (k1 * g.c[0][at] + k2 * g.c[1][at]) / (k1 * k1 + k2 * k2);
      g.c[0][at] -= k1 * kg;
      g.c[1][at] -= k2 * kg;
    }
  }
}

void nonlinear_rhs(const VectorSpectrum& u, const VectorSpectrum& b, bool dealias, VectorSpectrum& du,
                   VectorSpectrum& db) {
  const VectorSpectrum uu = advection(u, u, dealias);
  const VectorSpectrum bb = advection(b, b, dealias);
  const VectorSpectrum ub = advection(u, b, dealias);
  const VectorSpectrum bu = advection(b, u, dealias);
  for (int c = 0; c < 2; ++c)
    for (std::size_t i = 0; i < u.grid.size(); ++i) {
      du.c[c][i] = bb.c[c][i] - uu.c[c][i];
      db.c[c][i] = bu.c[c][i] - ub.c[c][i];
    }
  leray_project(du);
  leray_project(db);
}

}  // namespace mhd::reference
