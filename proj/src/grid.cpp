#include "mhd/grid.hpp"

#include <algorithm>
#include <string>

#include "mhd/errors.hpp"

namespace mhd {

double Mat2::max_abs() const {
  double r = 0.0;
  for (const auto& row : m)
    for (double v : row) r = std::max(r, std::abs(v));
  return r;
}

Mat2 Mat2::operator*(const Mat2& o) const {
  Mat2 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r.m[i][j] = m[i][0] * o.m[0][j] + m[i][1] * o.m[1][j];
  return r;
}

double wrap_angle(double a) {
  double w = std::fmod(a, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;
  return w;
}

Point wrap(Point p) { return {wrap_angle(p.x), wrap_angle(p.y)}; }

static double wrap_signed(double d) {
  d = std::fmod(d, kTwoPi);
  if (d > std::numbers::pi) d -= kTwoPi;
  if (d < -std::numbers::pi) d += kTwoPi;
  return d;
}

Vec2 torus_delta(Point a, Point b) { return {wrap_signed(b.x - a.x), wrap_signed(b.y - a.y)}; }

double torus_distance(Point a, Point b) {
  const Vec2 d = torus_delta(a, b);
  return std::hypot(d[0], d[1]);
}

TorusGrid::TorusGrid(int resolution) : m_(resolution) {
  if (resolution < 8 || resolution % 2 != 0)
    throw ConfigError("grid resolution must be even and >= 8, got " + std::to_string(resolution));
}

}  // namespace mhd
