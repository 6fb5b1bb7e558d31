#pragma once

#include "pb/bracket.hpp"

namespace pb {

/// One variable-block pair of the reciprocity check.
struct ParityBlock {
  std::string field_i;
  std::string field_j;
  int parity_product = 0;       // P_i * P_j
  double residual_reversal = 0; // L_ij(I(x)) + P_i P_j L_ij(x)
  double residual_dressed = 0;  // K_ij(x) - P_i P_j K_ji(I(x))
  bool pass = false;
};

struct ParityReport {
  std::vector<ParityBlock> blocks;
  double tolerance = 1e-10;
  bool pass = false;
  double max_residual() const;
};

/// Dense-assembly reciprocity check of the bare bivector (M = 0): per block
/// pair, (a) reversibility -- entries coupling parities P_i, P_j have parity
/// -P_i P_j under state time-reversal; (b) dressed symmetry --
/// L_ij(x) = P_i P_j L_ji(I(x)). Requires full parity assignments and a
/// small grid (dense assembly).
ParityReport check_bivector_parity(const Bracket& b, const Constants& c,
                                   const State& x, double tol = 1e-10);

/// Same with phenomenological matrix K = L + M; the supplied M (row-major
/// over flat coefficients) must be symmetric and obey the parity pattern
/// M_ij(I(x)) = P_i P_j M_ij(x); pass M for both x and I(x).
ParityReport check_combined(
    const Bracket& b, const Constants& c, const State& x,
    const std::function<std::vector<double>(const State&)>& M_sym,
    double tol = 1e-10);

}  // namespace pb
