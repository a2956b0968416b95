#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

namespace mhd {

using Complex = std::complex<double>;
/// M*M Fourier coefficients in FFT index order, row index k1, column index k2.
using Spectrum = std::vector<Complex>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Point {
  double x = 0.0;
  double y = 0.0;
};

using Vec2 = std::array<double, 2>;

/// Row-major 2x2 matrix: m[i][j] = d f_i / d x_j.
struct Mat2 {
  std::array<std::array<double, 2>, 2> m{};

  double det() const { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }
  double trace() const { return m[0][0] + m[1][1]; }
  double max_abs() const;
  Vec2 apply(const Vec2& v) const {
    return {m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]};
  }
  Mat2 operator*(const Mat2& o) const;
  static Mat2 identity() { return Mat2{{{{1.0, 0.0}, {0.0, 1.0}}}}; }
};

/// Wrap a coordinate into [0, 2pi).
double wrap_angle(double a);
Point wrap(Point p);
/// Flat torus distance with coordinate wrapping.
double torus_distance(Point a, Point b);
/// Shortest signed displacement b - a on the torus.
Vec2 torus_delta(Point a, Point b);

/// Uniform M x M grid over [0, 2pi)^2 with integer wavenumbers in (-M/2, M/2].
class TorusGrid {
 public:
  /// Throws ConfigError unless M is even and >= 8.
  explicit TorusGrid(int resolution);

  int resolution() const noexcept { return m_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(m_) * m_; }
  double spacing() const noexcept { return kTwoPi / m_; }

  /// Wavenumber stored at FFT index i.
  int wavenumber(int i) const noexcept { return i <= m_ / 2 ? i : i - m_; }
  /// FFT index holding wavenumber k; k must satisfy |k| <= M/2.
  int index(int k) const noexcept { return k >= 0 ? k : k + m_; }
  std::size_t flat(int i1, int i2) const noexcept { return static_cast<std::size_t>(i1) * m_ + i2; }
  /// True when |k| < M/2 (strictly inside the Nyquist band).
  bool resolvable(int k) const noexcept { return std::abs(k) < m_ / 2; }
  bool is_nyquist(int i) const noexcept { return i == m_ / 2; }

  friend bool operator==(const TorusGrid&, const TorusGrid&) = default;

 private:
  int m_;
};

}  // namespace mhd
