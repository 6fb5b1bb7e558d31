#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pb/bracket.hpp"
#include "pb/functional.hpp"

namespace pb {

struct CheckResult {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// Max relative antisymmetry defect |{F,H} + {H,F}| / (1 + |{F,H}|) over
/// nstates random band-limited states and all pairs from two independent
/// test-functional suites (15 pairs).
CheckResult verify_antisymmetry(const Bracket& b, const Constants& c,
                                int nstates = 5, std::uint64_t seed = 2026,
                                double tol = 1e-10);

/// |{FG,H} - F{G,H} - G{F,H}| / (1 + |{FG,H}|), product rule on the test
/// suite.
CheckResult verify_leibniz(const Bracket& b, const Constants& c,
                           std::uint64_t seed = 3, double tol = 1e-9);

/// Cyclic Jacobi residual on random band-limited covectors, gradients of the
/// bivector by central differences (dense application; small grids only).
/// tol: 1e-11 for state-independent bivectors, 1e-8 for state-linear ones.
CheckResult verify_jacobi(const Bracket& b, const Constants& c,
                          std::uint64_t seed = 11, double tol = 1e-8,
                          int ncovectors = 3);

/// max |{C,H}| for the schema's Casimir integrals against the test suite and
/// (when the bracket is a catalog entry) its default Hamiltonian.
std::vector<CheckResult> verify_casimirs(const Bracket& b, const Constants& c,
                                         std::uint64_t seed = 13,
                                         double tol = 1e-10);

/// The full per-bracket battery (antisymmetry, Leibniz, Jacobi with a
/// name-appropriate tolerance, Casimirs). jacobi is skipped above
/// max_jacobi_coeffs unknowns (dense assembly cost).
std::vector<CheckResult> verify_bracket(const Bracket& b, const Constants& c,
                                        std::uint64_t seed = 2026,
                                        std::size_t max_jacobi_coeffs = 700);

}  // namespace pb
