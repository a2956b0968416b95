#include "mhd/errors.hpp"
#include "mhd/oracles.hpp"
#include "mhd/solver.hpp"

namespace mhd {

namespace {

// f1 = -c_hi(t) c_lo(t) cross, f2 = F_lo.
class ClosedFormForcing final : public Forcing {
 public:
  explicit ClosedFormForcing(ForcedOracle oracle) : oracle_(std::move(oracle)) { oracle_.cross_term(); }

  void evaluate(double t, VectorSpectrum& fu, VectorSpectrum& fb) const override {
    const double s = -oracle_.coeff_high(t) * oracle_.coeff_low(t);
    const auto& cross = oracle_.cross_term();
    for (int c = 0; c < 2; ++c) {
      const Spectrum& src = cross.component(c);
      for (std::size_t i = 0; i < src.size(); ++i) fu.c[c][i] = s * src[i];
      fb.c[c] = oracle_.f2().component(c);
    }
  }

 private:
  ForcedOracle oracle_;
};

class ConstantForcing final : public Forcing {
 public:
  ConstantForcing(SpectralField2D fu, SpectralField2D fb) : fu_(std::move(fu)), fb_(std::move(fb)) {}

  void evaluate(double, VectorSpectrum& fu, VectorSpectrum& fb) const override {
    fu.c = fu_.components();
    fb.c = fb_.components();
  }

 private:
  SpectralField2D fu_, fb_;
};

}  // namespace

std::unique_ptr<Forcing> make_forcing(const ForcingSpec& spec, const TorusGrid& grid, double eta) {
  switch (spec.kind) {
    case ForcingKind::none:
      return nullptr;
    case ForcingKind::theorem2:
      require_resolvable(spec.nm, grid);
      require_resolvable(spec.n2, grid);
      return std::make_unique<ClosedFormForcing>(ForcedOracle(spec.nm, spec.n2, eta, grid));
    case ForcingKind::remark2:
      require_resolvable(spec.nm, grid);
      return std::make_unique<ClosedFormForcing>(ForcedOracle::with_tilde_t1(spec.nm, eta, grid));
    case ForcingKind::custom: {
      SpectralField2D fu(grid), fb(grid);
      for (const auto& term : spec.custom) {
        const SpectralField2D f =
            term.tilde_t1 ? make_tilde_t1(grid, term.amplitude) : make_taylor(term.spec, term.amplitude, grid);
        if (term.target == TaylorForce::Target::velocity)
          fu = fu + f;
        else
          fb = fb + f;
      }
      return std::make_unique<ConstantForcing>(std::move(fu), std::move(fb));
    }
  }
  throw ConfigError("unknown forcing kind");
}

}  // namespace mhd
