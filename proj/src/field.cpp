#include "mhd/field.hpp"

#include <algorithm>
#include <string>

#include "mhd/errors.hpp"
#include "mhd/fft.hpp"

namespace mhd {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kArea = kTwoPi * kTwoPi;

std::size_t partner(const TorusGrid& g, int i1, int i2) {
  const int m = g.resolution();
  return g.flat((m - i1) % m, (m - i2) % m);
}

}  // namespace

SpectralField2D::SpectralField2D(TorusGrid grid)
    : grid_(grid), c_{Spectrum(grid.size()), Spectrum(grid.size())} {}

SpectralField2D::SpectralField2D(TorusGrid grid, std::array<Spectrum, 2> coeffs)
    : grid_(grid), c_(std::move(coeffs)) {}

SpectralField2D SpectralField2D::adopt(TorusGrid grid, std::array<Spectrum, 2> coeffs) {
  return SpectralField2D(grid, std::move(coeffs));
}

SpectralField2D SpectralField2D::from_coefficients(TorusGrid grid, std::array<Spectrum, 2> coeffs,
                                                   double tol) {
  for (const auto& s : coeffs)
    if (s.size() != grid.size()) throw InputError("coefficient array size does not match grid");
  double scale = 0.0;
  for (const auto& s : coeffs)
    for (const auto& c : s) scale = std::max(scale, std::abs(c));
  const double bound = tol * std::max(scale, 1e-300);
  const int m = grid.resolution();
  for (int i1 = 0; i1 < m; ++i1) {
    for (int i2 = 0; i2 < m; ++i2) {
      const std::size_t at = grid.flat(i1, i2);
      const std::size_t mirror = partner(grid, i1, i2);
      const double k1 = grid.wavenumber(i1), k2 = grid.wavenumber(i2);
      for (int comp = 0; comp < 2; ++comp) {
        const Complex c = coeffs[comp][at];
        if (std::abs(c - std::conj(coeffs[comp][mirror])) > bound)
          throw InputError("coefficients are not Hermitian-symmetric");
        if ((grid.is_nyquist(i1) || grid.is_nyquist(i2) || (i1 == 0 && i2 == 0)) && std::abs(c) > bound)
          throw InputError("mean or Nyquist coefficient is nonzero");
      }
      const double kk = std::hypot(k1, k2);
      if (std::abs(k1 * coeffs[0][at] + k2 * coeffs[1][at]) > bound * std::max(kk, 1.0))
        throw InputError("field is not divergence-free");
    }
  }
  return SpectralField2D(grid, std::move(coeffs));
}

Complex SpectralField2D::coeff(int comp, int k1, int k2) const {
  const int half = grid_.resolution() / 2;
  if (std::abs(k1) > half || std::abs(k2) > half) return {};
  return c_[comp][grid_.flat(grid_.index(k1), grid_.index(k2))];
}

SpectralField2D SpectralField2D::operator+(const SpectralField2D& o) const {
  SpectralField2D r(*this);
  for (int comp = 0; comp < 2; ++comp)
    for (std::size_t i = 0; i < r.c_[comp].size(); ++i) r.c_[comp][i] += o.c_[comp][i];
  return r;
}

SpectralField2D SpectralField2D::operator-(const SpectralField2D& o) const {
  SpectralField2D r(*this);
  for (int comp = 0; comp < 2; ++comp)
    for (std::size_t i = 0; i < r.c_[comp].size(); ++i) r.c_[comp][i] -= o.c_[comp][i];
  return r;
}

SpectralField2D SpectralField2D::operator*(double s) const {
  SpectralField2D r(*this);
  for (auto& comp : r.c_)
    for (auto& c : comp) c *= s;
  return r;
}

bool SpectralField2D::identical(const SpectralField2D& o) const {
  return grid_ == o.grid_ && c_ == o.c_;
}

void require_resolvable(const TaylorSpec& spec, const TorusGrid& grid) {
  if (spec.n < 1 || spec.m < 1)
    throw ConfigError("Taylor wavenumbers must be positive, got (" + std::to_string(spec.n) + "," +
                      std::to_string(spec.m) + ")");
  if (!grid.resolvable(spec.n) || !grid.resolvable(spec.m))
    throw ConfigError("Taylor mode (" + std::to_string(spec.n) + "," + std::to_string(spec.m) +
                      ") is not resolvable on a " + std::to_string(grid.resolution()) + " grid");
}

SpectralField2D make_taylor(const TaylorSpec& spec, double amplitude, const TorusGrid& grid) {
  require_resolvable(spec, grid);
  std::array<Spectrum, 2> c{Spectrum(grid.size()), Spectrum(grid.size())};
  for (int a : {-1, 1}) {
    for (int b : {-1, 1}) {
      const std::size_t at = grid.flat(grid.index(a * spec.n), grid.index(b * spec.m));
      // sin(nx) sin(my) -> -ab/4 ; cos(nx) cos(my) -> 1/4
      c[0][at] = -amplitude * spec.m * a * b / 4.0;
      c[1][at] = amplitude * spec.n / 4.0;
    }
  }
  return SpectralField2D::adopt(grid, std::move(c));
}

SpectralField2D make_tilde_t1(const TorusGrid& grid, double amplitude) {
  std::array<Spectrum, 2> c{Spectrum(grid.size()), Spectrum(grid.size())};
  c[0][grid.flat(0, grid.index(1))] = -kI * amplitude / 2.0;
  c[0][grid.flat(0, grid.index(-1))] = kI * amplitude / 2.0;
  c[1][grid.flat(grid.index(1), 0)] = -kI * amplitude / 4.0;
  c[1][grid.flat(grid.index(-1), 0)] = kI * amplitude / 4.0;
  return SpectralField2D::adopt(grid, std::move(c));
}

Vec2 eval_field(const SpectralField2D& f, Point x) {
  const auto& g = f.grid();
  const int m = g.resolution();
  Vec2 out{0.0, 0.0};
  for (int i1 = 0; i1 < m; ++i1) {
    for (int i2 = 0; i2 < m; ++i2) {
      const std::size_t at = g.flat(i1, i2);
      const Complex c0 = f.component(0)[at], c1 = f.component(1)[at];
      if (c0 == Complex{} && c1 == Complex{}) continue;
      const double phase = g.wavenumber(i1) * x.x + g.wavenumber(i2) * x.y;
      const Complex e{std::cos(phase), std::sin(phase)};
      out[0] += (c0 * e).real();
      out[1] += (c1 * e).real();
    }
  }
  return out;
}

Mat2 jacobian(const SpectralField2D& f, Point x) {
  const auto& g = f.grid();
  const int m = g.resolution();
  Mat2 jac;
  for (int i1 = 0; i1 < m; ++i1) {
    for (int i2 = 0; i2 < m; ++i2) {
      const std::size_t at = g.flat(i1, i2);
      const double k[2] = {static_cast<double>(g.wavenumber(i1)), static_cast<double>(g.wavenumber(i2))};
      const double phase = k[0] * x.x + k[1] * x.y;
      const Complex e{std::cos(phase), std::sin(phase)};
      for (int comp = 0; comp < 2; ++comp) {
        const Complex c = f.component(comp)[at];
        if (c == Complex{}) continue;
        for (int j = 0; j < 2; ++j) jac.m[comp][j] += (kI * k[j] * c * e).real();
      }
    }
  }
  return jac;
}

VectorSpectrum laplacian(const VectorSpectrum& g) {
  VectorSpectrum out(g.grid);
  const int m = g.grid.resolution();
  for (int i1 = 0; i1 < m; ++i1) {
    for (int i2 = 0; i2 < m; ++i2) {
      const double k1 = g.grid.wavenumber(i1), k2 = g.grid.wavenumber(i2);
      const std::size_t at = g.grid.flat(i1, i2);
      for (int comp = 0; comp < 2; ++comp) out.c[comp][at] = -(k1 * k1 + k2 * k2) * g.c[comp][at];
    }
  }
  return out;
}

SpectralField2D laplacian(const SpectralField2D& f) {
  VectorSpectrum g(f.grid(), f.components());
  return SpectralField2D::adopt(f.grid(), laplacian(g).c);
}

double max_divergence(const VectorSpectrum& g) {
  const int m = g.grid.resolution();
  double r = 0.0;
  for (int i1 = 0; i1 < m; ++i1)
    for (int i2 = 0; i2 < m; ++i2) {
      const std::size_t at = g.grid.flat(i1, i2);
      r = std::max(r, std::abs(double(g.grid.wavenumber(i1)) * g.c[0][at] +
                               double(g.grid.wavenumber(i2)) * g.c[1][at]));
    }
  return r;
}

double inner_product(const SpectralField2D& f, const SpectralField2D& g) {
  double s = 0.0;
  for (int comp = 0; comp < 2; ++comp)
    for (std::size_t i = 0; i < f.component(comp).size(); ++i)
      s += (f.component(comp)[i] * std::conj(g.component(comp)[i])).real();
  return kArea * s;
}

double l2_norm(const SpectralField2D& f) { return sobolev_norm(f, 0); }

double sobolev_norm(const VectorSpectrum& g, int r) {
  if (r < 0 || r > 8) throw MisuseError("Sobolev index must lie in [0, 8]");
  const int m = g.grid.resolution();
  double s = 0.0;
  for (int i1 = 0; i1 < m; ++i1) {
    const double k1 = g.grid.wavenumber(i1);
    for (int i2 = 0; i2 < m; ++i2) {
      const double k2 = g.grid.wavenumber(i2);
      const std::size_t at = g.grid.flat(i1, i2);
      const double w = std::pow(1.0 + k1 * k1 + k2 * k2, r);
      s += w * (std::norm(g.c[0][at]) + std::norm(g.c[1][at]));
    }
  }
  return std::sqrt(kArea * s);
}

double sobolev_norm(const SpectralField2D& f, int r) {
  return sobolev_norm(VectorSpectrum(f.grid(), f.components()), r);
}

double c1_norm(const SpectralField2D& f, int oversample) {
  if (oversample < 1) throw MisuseError("c1_norm oversample must be >= 1");
  const auto& g = f.grid();
  const int m = g.resolution();
  const int s = oversample * m;
  // value, d/dx, d/dy of both components
  std::array<Spectrum, 6> spectra;
  for (auto& sp : spectra) sp.assign(g.size(), Complex{});
  for (int i1 = 0; i1 < m; ++i1) {
    for (int i2 = 0; i2 < m; ++i2) {
      const std::size_t at = g.flat(i1, i2);
      const double k1 = g.wavenumber(i1), k2 = g.wavenumber(i2);
      for (int comp = 0; comp < 2; ++comp) {
        const Complex c = f.component(comp)[at];
        spectra[3 * comp] [at] = c;
        spectra[3 * comp + 1][at] = kI * k1 * c;
        spectra[3 * comp + 2][at] = kI * k2 * c;
      }
    }
  }
  double sup_value = 0.0, sup_grad = 0.0;
  for (int idx = 0; idx < 6; ++idx) {
    const auto samples = spectrum_to_grid(spectra[idx], g, s);
    double mx = 0.0;
    for (const auto& v : samples) mx = std::max(mx, std::abs(v.real()));
    if (idx % 3 == 0)
      sup_value = std::max(sup_value, mx);
    else
      sup_grad = std::max(sup_grad, mx);
  }
  return sup_value + sup_grad;
}

void leray_project_inplace(VectorSpectrum& g) {
  const int m = g.grid.resolution();
  const auto grid = g.grid;
#pragma omp parallel for schedule(static)
  for (int i1 = 0; i1 < m; ++i1) {
    const double k1 = grid.wavenumber(i1);
    for (int i2 = 0; i2 < m; ++i2) {
      const std::size_t at = grid.flat(i1, i2);
      if ((i1 == 0 && i2 == 0) || grid.is_nyquist(i1) || grid.is_nyquist(i2)) {
        g.c[0][at] = g.c[1][at] = Complex{};
        continue;
      }
      const double k2 = grid.wavenumber(i2);
      const Complex kg = (k1 * g.c[0][at] + k2 * g.c[1][at]) / (k1 * k1 + k2 * k2);
      g.c[0][at] -= k1 * kg;
      g.c[1][at] -= k2 * kg;
    }
  }
}

SpectralField2D leray_project(const VectorSpectrum& g) {
  VectorSpectrum out = g;
  leray_project_inplace(out);
  return SpectralField2D::adopt(g.grid, std::move(out.c));
}

void hermitian_symmetrize(Spectrum& s, const TorusGrid& grid) {
  const int m = grid.resolution();
  for (int i1 = 0; i1 < m; ++i1) {
    for (int i2 = 0; i2 < m; ++i2) {
      const std::size_t at = grid.flat(i1, i2);
      const std::size_t mirror = partner(grid, i1, i2);
      if (mirror < at) continue;
      const Complex avg = 0.5 * (s[at] + std::conj(s[mirror]));
      s[at] = avg;
      s[mirror] = std::conj(avg);
    }
  }
}

StreamFunction stream_function(const SpectralField2D& f) {
  const auto& g = f.grid();
  const int m = g.resolution();
  StreamFunction psi{g, Spectrum(g.size())};
  for (int i1 = 0; i1 < m; ++i1) {
    for (int i2 = 0; i2 < m; ++i2) {
      if (i1 == 0 && i2 == 0) continue;
      const double k1 = g.wavenumber(i1), k2 = g.wavenumber(i2);
      const std::size_t at = g.flat(i1, i2);
      psi.coeffs[at] = kI * (k1 * f.component(1)[at] - k2 * f.component(0)[at]) / (k1 * k1 + k2 * k2);
    }
  }
  return psi;
}

SpectralField2D perp_gradient(const StreamFunction& psi) {
  const auto& g = psi.grid;
  const int m = g.resolution();
  std::array<Spectrum, 2> c{Spectrum(g.size()), Spectrum(g.size())};
  for (int i1 = 0; i1 < m; ++i1) {
    for (int i2 = 0; i2 < m; ++i2) {
      if (g.is_nyquist(i1) || g.is_nyquist(i2)) continue;
      const std::size_t at = g.flat(i1, i2);
      c[0][at] = kI * double(g.wavenumber(i2)) * psi.coeffs[at];
      c[1][at] = -kI * double(g.wavenumber(i1)) * psi.coeffs[at];
    }
  }
  return SpectralField2D::adopt(g, std::move(c));
}

double eval_stream(const StreamFunction& psi, Point x) {
  const auto& g = psi.grid;
  const int m = g.resolution();
  double v = 0.0;
  for (int i1 = 0; i1 < m; ++i1)
    for (int i2 = 0; i2 < m; ++i2) {
      const Complex c = psi.coeffs[g.flat(i1, i2)];
      if (c == Complex{}) continue;
      const double phase = g.wavenumber(i1) * x.x + g.wavenumber(i2) * x.y;
      v += (c * Complex{std::cos(phase), std::sin(phase)}).real();
    }
  return v;
}

std::array<std::vector<Complex>, 2> to_grid(const SpectralField2D& f) {
  return {spectrum_to_grid(f.component(0), f.grid(), f.resolution()),
          spectrum_to_grid(f.component(1), f.grid(), f.resolution())};
}

VectorSpectrum from_grid(const TorusGrid& grid, const std::array<std::vector<Complex>, 2>& samples) {
  return VectorSpectrum(grid, {grid_to_spectrum(samples[0], grid), grid_to_spectrum(samples[1], grid)});
}

}  // namespace mhd
