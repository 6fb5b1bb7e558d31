#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pb/state.hpp"

namespace pb {

/// Named initial conditions. "zero", "uniform" (unit densities, zero fields,
/// Maxwellian-like phase envelope), "random" (band-limited, seeded),
/// "maxwell_planewave" (fundamental mode along x, needs E and B),
/// "mhd_smooth" (1D smooth solenoidal profile, needs rho, s, B and a
/// momentum variable). Throws ValidationError on unknown names or missing
/// fields.
void apply_preset(State& x, const std::string& name, const Constants& c,
                  double amplitude = 0.1, std::uint64_t seed = 1);

std::vector<std::string> preset_names();

/// Analytic plane wave at time t: E_y = A cos(k(x - ct)),
/// B_z = (A/c) cos(k(x - ct)) with k the fundamental mode of the box.
void maxwell_planewave_fill(State& x, const Constants& c, double t,
                            double amplitude = 1.0);

}  // namespace pb
