#pragma once

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "pb/state.hpp"

namespace pb {

/// A functional F[x] with its variational derivative deltaF/delta x, itself a
/// state-shaped object (the L^2 representative: dF/dt = dot(derivative, xdot)).
struct Functional {
  std::string name;
  std::function<double(const State&)> evaluate;
  std::function<State(const State&)> derivative;
};

/// Central finite-difference variational derivative. Perturbs one coefficient
/// at a time and divides by the quadrature weight, so the result pairs
/// correctly under dot(). Oracle for analytic derivatives; O(ncoeffs) evals.
State numeric_derivative(const Functional& f, const State& x, double h = 1e-5);

/// Max |analytic - numeric| coefficient mismatch of f.derivative at x.
double derivative_mismatch(const Functional& f, const State& x,
                           double h = 1e-5);

/// Deterministic band-limited scalar field: mean + sum of modes with
/// |k_axis| <= kmax per axis, coefficients drawn from rng in [-amp, amp].
void fill_band_limited(std::span<double> out, const Grid3& g, int kmax,
                       double mean, double amp, std::mt19937_64& rng);
void fill_band_limited_phase(std::span<double> out, const PhaseGrid& g,
                             int kmax, double mean, double amp,
                             std::mt19937_64& rng);

/// Phase fill that is band-limited along the momentum axes too (periodic
/// modes instead of a Gaussian envelope). Discrete-identity tests use this so
/// products stay alias-free on coarse grids.
void fill_band_limited_phase_modes(std::span<double> out, const PhaseGrid& g,
                                   int kmax, double mean, double amp,
                                   std::mt19937_64& rng);

/// Fill every field of x with band-limited data. Phase densities and fields
/// named rho/s/f get positive mean so logs and divisions stay safe.
void randomize_state(State& x, int kmax, double amp, std::mt19937_64& rng);

/// As randomize_state, but phase fields use the periodic-mode fill.
void randomize_state_modes(State& x, int kmax, double amp,
                           std::mt19937_64& rng);

/// Suite of test functionals with analytic derivatives against a fixed
/// band-limited kernel state: linear int w*x, quadratic (1/2) int w*x^2,
/// cubic (1/3) int x^3.
std::vector<Functional> test_functional_suite(const State& prototype,
                                              std::uint64_t seed);

}  // namespace pb
