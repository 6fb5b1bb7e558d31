#pragma once

#include "pb/bracket.hpp"
#include "pb/functional.hpp"

namespace pb {

/// Map between levels of description. project sends fine states down;
/// pullback lifts coarse functionals (F -> F o pi, derivative by the chain
/// rule, i.e. the adjoint of the tangent map applied to the coarse
/// derivative).
struct ProjectionMap {
  std::string name;
  StateSchema fine;
  StateSchema coarse;
  GridPtr grid;
  PhaseGridPtr phase;  // null unless the fine level is kinetic
  std::function<State(const State&)> project;
  std::function<Functional(const Functional&)> pullback;
};

/// f -> (u, rho, s): rho = m int f dp, u_i = int p_i f dp,
/// s = int sigma(f) dp with sigma(f) = -f ln f by default (sigma(0) = 0).
/// Custom sigma must come with its derivative.
ProjectionMap plasma_to_fluid(
    GridPtr grid, PhaseGridPtr phase, const Constants& c,
    std::function<double(double)> sigma = nullptr,
    std::function<double(double)> dsigma = nullptr);

/// (u, rho, s, E, B) -> (M = u + eps0 E x B, rho, s, E, B); invert = true
/// gives the inverse shift.
ProjectionMap momentum_shift(GridPtr grid, const Constants& c,
                             bool invert = false);

/// (u1, rho1, s1, u2, rho2, s2) -> (u = u1+u2, rho1, rho2, s = s1+s2).
ProjectionMap binary_sum(GridPtr grid);

/// (u, rho1, rho2, s) -> (u, rho = rho1+rho2, s).
ProjectionMap total_density(GridPtr grid);

ProjectionMap identity_map(const StateSchema& schema, GridPtr grid,
                           PhaseGridPtr phase = nullptr);

/// Lookup by name: plasma_to_fluid, momentum_shift, momentum_shift_inverse,
/// binary_sum, total_density.
ProjectionMap make_projection(const std::string& name, GridPtr grid,
                              PhaseGridPtr phase, const Constants& c);

struct PoissonMapReport {
  double max_residual = 0.0;  // relative, per |{F,H}| scale
  double boundary_mass = 0.0; // momentum-truncation diagnostic (kinetic maps)
  double tolerance = 1e-8;
  bool pass = false;
};

/// Checks {F,H}_coarse(pi(x)) = {F o pi, H o pi}_fine(x) over random fine
/// states and coarse test-functional pairs. Pass a custom functional list to
/// restrict the suite (e.g. moment functionals only for kinetic maps).
PoissonMapReport verify_poisson_map(
    const ProjectionMap& map, const Bracket& fine, const Bracket& coarse,
    const Constants& c, int samples, double tolerance,
    std::uint64_t seed = 2026,
    const std::vector<Functional>* functionals = nullptr);

}  // namespace pb
