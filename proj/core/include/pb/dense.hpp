#pragma once

#include "pb/bracket.hpp"

namespace pb {

/// Dense bivector matrix A(x) with ncoeffs x ncoeffs entries (row-major):
/// apply(x, dH) coefficients = A * (dH coefficients). Assembled column by
/// column from unit covectors. Intended for grids with <= ~200 unknowns; the
/// independent cross-check for antisymmetry, Jacobi, coupling signs and
/// OCRR. On uniform-weight (non-phase) schemas A is itself antisymmetric.
std::vector<double> dense_bivector(const Bracket& b, const Constants& c,
                                   const State& x);

/// Max |A + A^T| entry after reweighting rows by quadrature weights (the
/// bracket-level antisymmetry in matrix form).
double dense_antisymmetry_residual(const Bracket& b, const Constants& c,
                                   const State& x);

/// Cyclic Jacobi residual {F,{G,H}} + {G,{H,F}} + {H,{F,G}} at x for linear
/// functionals with constant derivative densities a, b, cc. Inner gradients
/// by central differences in the state (exact for bivectors at most
/// quadratic in x, up to roundoff).
double jacobi_cyclic_residual(const Bracket& b, const Constants& c,
                              const State& x, const State& a, const State& bb,
                              const State& cc, double fd_eps = 1e-2);

}  // namespace pb
