#pragma once

#include "mhd/field.hpp"

// Serial reference implementations. They follow the advective form of the
// equations literally and are kept as the independent route that the
// parallel kernels are tested and benchmarked against.
namespace mhd::reference {

/// (a . grad) b on the grid, transformed back; not projected.
VectorSpectrum advection(const VectorSpectrum& a, const VectorSpectrum& b, bool dealias);

/// P[-(u.grad)u + (b.grad)b] and P[-(u.grad)b + (b.grad)u], dealiased when requested.
void nonlinear_rhs(const VectorSpectrum& u, const VectorSpectrum& b, bool dealias, VectorSpectrum& du,
                   VectorSpectrum& db);

/// Serial Leray projection, mean and Nyquist band zeroed.
void leray_project(VectorSpectrum& g);

}  // namespace mhd::reference
