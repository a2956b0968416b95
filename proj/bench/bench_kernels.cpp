#include <benchmark/benchmark.h>

#include <random>

#include "mhd/kernels.hpp"
#include "mhd/reference.hpp"

using namespace mhd;

namespace {

VectorSpectrum random_state(const TorusGrid& grid, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> normal;
  Spectrum psi(grid.size());
  const int kmax = grid.resolution() / 3;
  for (int k1 = -kmax; k1 <= kmax; ++k1)
    for (int k2 = -kmax; k2 <= kmax; ++k2) {
      if (k1 < 0 || (k1 == 0 && k2 <= 0)) continue;
      const Complex c{normal(rng), normal(rng)};
      psi[grid.flat(grid.index(k1), grid.index(k2))] = c;
      psi[grid.flat(grid.index(-k1), grid.index(-k2))] = std::conj(c);
    }
  return VectorSpectrum(grid, perp_gradient(StreamFunction{grid, psi}).components());
}

void BM_NonlinearParallel(benchmark::State& state) {
  const TorusGrid grid(static_cast<int>(state.range(0)));
  const auto u = random_state(grid, 1), b = random_state(grid, 2);
  kernels::Workspace ws(grid);
  VectorSpectrum du(grid), db(grid);
  for (auto _ : state) {
    kernels::nonlinear_rhs(u, b, true, du, db, ws);
    benchmark::DoNotOptimize(du.c[0].data());
  }
}

void BM_NonlinearReference(benchmark::State& state) {
  const TorusGrid grid(static_cast<int>(state.range(0)));
  const auto u = random_state(grid, 1), b = random_state(grid, 2);
  VectorSpectrum du(grid), db(grid);
  for (auto _ : state) {
    reference::nonlinear_rhs(u, b, true, du, db);
    benchmark::DoNotOptimize(du.c[0].data());
  }
}

void BM_LerayParallel(benchmark::State& state) {
  const TorusGrid grid(static_cast<int>(state.range(0)));
  auto g = random_state(grid, 3);
  for (auto _ : state) {
    leray_project_inplace(g);
    benchmark::DoNotOptimize(g.c[0].data());
  }
}

void BM_LerayReference(benchmark::State& state) {
  const TorusGrid grid(static_cast<int>(state.range(0)));
  auto g = random_state(grid, 3);
  for (auto _ : state) {
    reference::leray_project(g);
    benchmark::DoNotOptimize(g.c[0].data());
  }
}

}  // namespace

BENCHMARK(BM_NonlinearParallel)->Arg(64)->Arg(128)->Arg(256);
BENCHMARK(BM_NonlinearReference)->Arg(64)->Arg(128)->Arg(256);
BENCHMARK(BM_LerayParallel)->Arg(128)->Arg(256);
BENCHMARK(BM_LerayReference)->Arg(128)->Arg(256);

BENCHMARK_MAIN();
