#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "pb/bracket.hpp"
#include "pb/config.hpp"
#include "pb/functional.hpp"
#include "pb/hamiltonians.hpp"

namespace pb {

/// One classical RK4 step of xdot = L(x) dH(x). Throws BlowupError if the
/// result is not finite.
State step_rk4(const Bracket& b, const Constants& c, const Functional& H,
               const State& x, double dt, long step_index = 0);

struct RunConfig {
  std::string bracket = "em";
  Constants constants;
  std::array<int, 3> dims{16, 1, 1};
  std::array<double, 3> lengths{2.0 * 3.14159265358979323846,
                                2.0 * 3.14159265358979323846,
                                2.0 * 3.14159265358979323846};
  std::array<int, 3> pdims{8, 1, 1};
  std::array<double, 3> pmax{4.0, 4.0, 4.0};

  std::string preset = "random";
  double amplitude = 0.1;
  std::uint64_t seed = 1;

  double dt = 0.0;  // <= 0 picks 0.1 * min grid spacing / c
  long steps = 100;
  long stride = 1;  // CSV row every stride steps (step 0 and the last always)

  double eos_K = 1.0;
  double eos_gamma = 5.0 / 3.0;
  double eos_cv = 1.0;
  double interaction_alpha = 0.0;
};

/// Populate a RunConfig from a [run] section (every key optional; constants
/// read from [constants]).
RunConfig run_config_from(const Config& cfg);

struct RunResult {
  std::vector<std::string> columns;  // step,time,energy,monitor:...,constraint:...
  std::vector<std::vector<double>> rows;
  State final_state;
  double dt = 0.0;
  double final_time = 0.0;
};

/// Integrate the named bracket's flow from the preset initial condition.
/// Monitors: total energy, the schema's Casimir integrals, and the max-norm
/// of each bracket constraint residual.
RunResult run(const RunConfig& rc);

/// Deterministic CSV serialization of a run (17 significant digits).
std::string csv_text(const RunResult& r);
void write_csv(const std::string& path, const RunResult& r);

/// Integral invariants read off the schema: int of every scalar field; int
/// f, int f^2, int f^3 for every phase density.
std::vector<Functional> casimir_suite(const State& prototype);

}  // namespace pb
