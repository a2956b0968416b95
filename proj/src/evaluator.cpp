#include "mhd/evaluator.hpp"

#include <algorithm>

namespace mhd {

FieldEvaluator::FieldEvaluator(const SpectralField2D& f, double prune_rel) {
  const auto& g = f.grid();
  const int m = g.resolution();
  const StreamFunction psi = stream_function(f);
  double largest = 0.0;
  for (int comp = 0; comp < 2; ++comp)
    for (const auto& c : f.component(comp)) largest = std::max(largest, std::abs(c));
  const double cutoff = prune_rel * largest;
  for (int i1 = 0; i1 < m; ++i1) {
    const int k1 = g.wavenumber(i1);
    for (int i2 = 0; i2 < m; ++i2) {
      const int k2 = g.wavenumber(i2);
      if (k1 < 0 || (k1 == 0 && k2 <= 0)) continue;
      if (g.is_nyquist(i1) || g.is_nyquist(i2)) continue;
      const std::size_t at = g.flat(i1, i2);
      const Complex c0 = f.component(0)[at], c1 = f.component(1)[at];
      if (std::max(std::abs(c0), std::abs(c1)) <= cutoff) continue;
      if (c0 == Complex{} && c1 == Complex{}) continue;
      // doubled: the mirrored mode contributes the conjugate
      modes_.push_back({k1, k2, 2.0 * c0, 2.0 * c1, 2.0 * psi.coeffs[at]});
      kmax_ = std::max({kmax_, k1, std::abs(k2)});
    }
  }
}

template <class F>
void FieldEvaluator::for_each_phase(Point x, F&& fn) const {
  // small tables, one sincos per wavenumber; stack storage up to the usual sizes
  constexpr int kStack = 256;
  Complex ex_buf[kStack], ey_buf[2 * kStack + 1];
  std::vector<Complex> ex_heap, ey_heap;
  Complex* ex = ex_buf;
  Complex* ey = ey_buf;
  if (kmax_ >= kStack) {
    ex_heap.resize(kmax_ + 1);
    ey_heap.resize(2 * kmax_ + 1);
    ex = ex_heap.data();
    ey = ey_heap.data();
  }
  for (int k = 0; k <= kmax_; ++k) ex[k] = std::polar(1.0, k * x.x);
  for (int k = -kmax_; k <= kmax_; ++k) ey[k + kmax_] = std::polar(1.0, k * x.y);
  for (const auto& md : modes_) fn(md, ex[md.k1] * ey[md.k2 + kmax_]);
}

Vec2 FieldEvaluator::value(Point x) const {
  Vec2 v{0.0, 0.0};
  for_each_phase(x, [&](const Mode& md, Complex e) {
    v[0] += (md.c0 * e).real();
    v[1] += (md.c1 * e).real();
  });
  return v;
}

void FieldEvaluator::value_and_jacobian(Point x, Vec2& v, Mat2& jac) const {
  v = {0.0, 0.0};
  jac = Mat2{};
  for_each_phase(x, [&](const Mode& md, Complex e) {
    const Complex c[2] = {md.c0 * e, md.c1 * e};
    for (int i = 0; i < 2; ++i) {
      v[i] += c[i].real();
      // d/dx_j Re(c e^{i k.x}) = -k_j Im(c e)
      jac.m[i][0] -= md.k1 * c[i].imag();
      jac.m[i][1] -= md.k2 * c[i].imag();
    }
  });
}

double FieldEvaluator::stream(Point x) const {
  double s = 0.0;
  for_each_phase(x, [&](const Mode& md, Complex e) { s += (md.psi * e).real(); });
  return s;
}

}  // namespace mhd
