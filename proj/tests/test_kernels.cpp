#include "doctest.h"
#include "mhd/kernels.hpp"
#include "mhd/oracles.hpp"
#include "mhd/reference.hpp"
#include "test_helpers.hpp"

using namespace mhd;

namespace {

double raw_norm(const VectorSpectrum& a) { return std::sqrt(testing::raw_inner(a, a)); }

double raw_diff(const VectorSpectrum& a, const VectorSpectrum& b) {
  VectorSpectrum d(a.grid);
  kernels::axpy(a, -1.0, b, d);
  return raw_norm(d);
}

VectorSpectrum raw(const SpectralField2D& f) { return VectorSpectrum(f.grid(), f.components()); }

}  // namespace

TEST_CASE("parallel divergence-form kernel matches the serial advective reference") {
  for (int m : {16, 32, 48}) {
    const TorusGrid grid(m);
    const auto u = raw(testing::random_field(grid, m / 2 - 1, 3));
    const auto b = raw(testing::random_field(grid, m / 2 - 1, 4));
    kernels::Workspace ws(grid);
    VectorSpectrum du(grid), db(grid), ru(grid), rb(grid);
    kernels::nonlinear_rhs(u, b, true, du, db, ws);
    reference::nonlinear_rhs(u, b, true, ru, rb);
    INFO("m = " << m);
    CHECK(raw_diff(du, ru) < 1e-12 * raw_norm(ru));
    CHECK(raw_diff(db, rb) < 1e-12 * raw_norm(rb));
    CHECK(max_divergence(du) < 1e-12 * raw_norm(du));
    CHECK(max_divergence(db) < 1e-12 * raw_norm(db));
    CHECK(du.c[0][0] == Complex{});
    CHECK(db.c[1][0] == Complex{});
  }
}

TEST_CASE("parallel and serial Leray projections agree") {
  const TorusGrid grid(32);
  auto a = testing::random_raw(grid, 15, 8);
  auto b = a;
  leray_project_inplace(a);
  reference::leray_project(b);
  CHECK(raw_diff(a, b) == 0.0);
}

TEST_CASE("Taylor fields produce no Lorentz force after projection") {
  const TorusGrid grid(32);
  kernels::Workspace ws(grid);
  for (TaylorSpec s : {TaylorSpec{1, 1}, TaylorSpec{4, 4}, TaylorSpec{2, 5}}) {
    const auto b = raw(make_taylor(s, 1.0, grid));
    const VectorSpectrum u(grid);
    VectorSpectrum du(grid), db(grid);
    kernels::nonlinear_rhs(u, b, true, du, db, ws);
    CHECK(raw_norm(du) < 1e-12 * raw_norm(b));
    CHECK(raw_norm(db) == 0.0);
  }
}

TEST_CASE("u = b gives no induction") {
  const TorusGrid grid(32);
  kernels::Workspace ws(grid);
  const auto f = raw(testing::random_field(grid, 8, 12));
  VectorSpectrum du(grid), db(grid);
  kernels::nonlinear_rhs(f, f, true, du, db, ws);
  CHECK(raw_norm(db) < 1e-14 * raw_norm(f));
  // -(u.grad)u + (b.grad)b cancels as well
  CHECK(raw_norm(du) < 1e-14 * raw_norm(f));
}

TEST_CASE("two-mode magnetic field: velocity tendency is the projected cross term") {
  const TorusGrid grid(32);
  kernels::Workspace ws(grid);
  const ForcedOracle oracle({4, 4}, {1, 1}, 0.5, grid);
  const auto b = raw(make_taylor({4, 4}, 1.0, grid) + make_taylor({1, 1}, 1.0, grid));
  VectorSpectrum du(grid), db(grid);
  kernels::nonlinear_rhs(VectorSpectrum(grid), b, true, du, db, ws);
  const auto cross = raw(oracle.cross_term());
  CHECK(raw_norm(cross) > 1.0);
  CHECK(raw_diff(du, cross) < 1e-12 * raw_norm(cross));
}

TEST_CASE("dealias mask follows the 2/3 rule") {
  const TorusGrid grid(12);
  CHECK(kernels::dealias_keep(grid, grid.index(3), 0));
  CHECK_FALSE(kernels::dealias_keep(grid, grid.index(4), 0));
  CHECK_FALSE(kernels::dealias_keep(grid, 0, grid.index(-5)));
  CHECK(kernels::dealias_keep(grid, grid.index(-3), grid.index(3)));
  const TorusGrid g128(128);
  CHECK(kernels::dealias_keep(g128, 42, 0));
  CHECK_FALSE(kernels::dealias_keep(g128, 43, 0));
}
