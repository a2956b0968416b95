#pragma once

#include <vector>

#include "mhd/field.hpp"

namespace mhd {

/// Point evaluator over the nonzero modes of a real field.
///
/// Uses Hermitian symmetry to sum over one half-plane of wavenumbers. Modes
/// whose amplitude is at most `prune_rel` times the largest amplitude are
/// dropped, which bounds the pointwise error by prune_rel * max|c| * (#dropped).
class FieldEvaluator {
 public:
  explicit FieldEvaluator(const SpectralField2D& f, double prune_rel = 0.0);

  Vec2 value(Point x) const;
  void value_and_jacobian(Point x, Vec2& v, Mat2& jac) const;
  /// Stream function psi with f = (d_y psi, -d_x psi), zero mean.
  double stream(Point x) const;
  std::size_t mode_count() const noexcept { return modes_.size(); }

 private:
  struct Mode {
    int k1, k2;  // k1 >= 0
    Complex c0, c1, psi;
  };
  // phase e^{i k.x} from per-axis tables e^{i k1 x}, e^{i k2 y}
  template <class F>
  void for_each_phase(Point x, F&& fn) const;

  std::vector<Mode> modes_;
  int kmax_ = 0;
};

}  // namespace mhd
