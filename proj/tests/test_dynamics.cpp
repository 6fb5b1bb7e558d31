#include <doctest.h>

#include <cmath>
#include <memory>
#include <numbers>

#include "pb/config.hpp"
#include "pb/dynamics.hpp"
#include "pb/presets.hpp"

using namespace pb;

TEST_CASE("RK4 step conserves the oscillator invariant to 4th order") {
  // em bracket on one Fourier mode is a harmonic oscillator; RK4's
  // amplification factor on the imaginary axis is 1 - (w dt)^6/72, so the
  // invariant drift per step scales as dt^6 and the total over a fixed
  // horizon as dt^5
  RunConfig rc;
  rc.bracket = "em";
  rc.preset = "maxwell_planewave";
  rc.amplitude = 1.0;
  rc.dims = {16, 1, 1};
  rc.steps = 32;
  rc.dt = 0.05;
  RunResult r1 = run(rc);
  rc.steps = 64;
  rc.dt = 0.025;
  RunResult r2 = run(rc);
  auto drift = [](const RunResult& r) {
    return std::abs(r.rows.back()[2] - r.rows.front()[2]) /
           std::abs(r.rows.front()[2]);
  };
  const double order = std::log2(drift(r1) / drift(r2));
  CHECK(order > 4.5);
  CHECK(order < 5.5);
}

TEST_CASE("default dt follows the CFL rule") {
  RunConfig rc;
  rc.bracket = "em";
  rc.preset = "zero";
  rc.dims = {10, 1, 1};
  rc.lengths = {5.0, 2 * std::numbers::pi, 2 * std::numbers::pi};
  rc.steps = 1;
  RunResult r = run(rc);
  CHECK(r.dt == doctest::Approx(0.1 * 0.5).epsilon(1e-12));  // c = 1
}

TEST_CASE("mhd smooth run conserves its invariants") {
  RunConfig rc;
  rc.bracket = "mhd";
  rc.preset = "mhd_smooth";
  rc.amplitude = 0.05;
  rc.dims = {24, 1, 1};
  rc.dt = 0.01;
  rc.steps = 500;
  rc.stride = 100;
  RunResult r = run(rc);
  const auto& first = r.rows.front();
  const auto& last = r.rows.back();
  // column order: step, time, energy, monitors..., constraints...
  int col_rho = -1, col_s = -1, col_divB = -1;
  for (std::size_t i = 0; i < r.columns.size(); ++i) {
    if (r.columns[i] == "monitor:int_rho") col_rho = static_cast<int>(i);
    if (r.columns[i] == "monitor:int_s") col_s = static_cast<int>(i);
    if (r.columns[i] == "constraint:div_B") col_divB = static_cast<int>(i);
  }
  REQUIRE(col_rho > 0);
  REQUIRE(col_s > 0);
  REQUIRE(col_divB > 0);
  CHECK(std::abs(last[2] - first[2]) / std::abs(first[2]) < 1e-8);
  CHECK(std::abs(last[col_rho] - first[col_rho]) < 1e-10);
  CHECK(std::abs(last[col_s] - first[col_s]) < 1e-10);
  CHECK(last[col_divB] < 1e-11);
}

TEST_CASE("blow-up raises with the offending step") {
  RunConfig rc;
  rc.bracket = "hydro";
  rc.preset = "random";
  rc.amplitude = 0.4;
  rc.seed = 4;
  rc.dims = {16, 1, 1};
  rc.dt = 50.0;  // wildly unstable
  rc.steps = 200;
  bool threw = false;
  try {
    run(rc);
  } catch (const BlowupError& e) {
    threw = true;
    CHECK(e.step >= 0);
    CHECK(e.step < 200);
  } catch (const ValidationError&) {
    threw = true;  // density went non-positive first: equally a failed run
  }
  CHECK(threw);
}

TEST_CASE("run_config_from reads every section") {
  Config cfg = Config::parse(
      "[run]\nbracket = mhd\npreset = mhd_smooth\namplitude = 0.2\n"
      "seed = 7\ndt = 0.01\nsteps = 42\nstride = 6\neos_gamma = 1.4\n"
      "[grid]\nn1 = 12\nL1 = 3.0\nnp1 = 4\npmax1 = 2.5\n"
      "[constants]\neps0 = 2.0\nmu0 = 0.5\nm = 1 2\nz = 1 -1\n");
  RunConfig rc = run_config_from(cfg);
  CHECK(rc.bracket == "mhd");
  CHECK(rc.preset == "mhd_smooth");
  CHECK(rc.amplitude == 0.2);
  CHECK(rc.seed == 7);
  CHECK(rc.dt == 0.01);
  CHECK(rc.steps == 42);
  CHECK(rc.stride == 6);
  CHECK(rc.eos_gamma == 1.4);
  CHECK(rc.dims[0] == 12);
  CHECK(rc.lengths[0] == 3.0);
  CHECK(rc.pdims[0] == 4);
  CHECK(rc.pmax[0] == 2.5);
  CHECK(rc.constants.eps0 == 2.0);
  CHECK(rc.constants.mu0 == 0.5);
  REQUIRE(rc.constants.m.size() == 2);
  CHECK(rc.constants.z[1] == -1.0);
}

TEST_CASE("csv serialization is deterministic and well-formed") {
  RunConfig rc;
  rc.bracket = "hydro";
  rc.preset = "random";
  rc.seed = 12;
  rc.dims = {8, 1, 1};
  rc.steps = 20;
  rc.stride = 5;
  const std::string a = csv_text(run(rc));
  const std::string b = csv_text(run(rc));
  CHECK(a == b);  // byte-identical
  CHECK(a.rfind("step,time,energy", 0) == 0);
  // header + rows at steps 0,5,10,15,20
  int lines = 0;
  for (char ch : a)
    if (ch == '\n') ++lines;
  CHECK(lines == 6);
}

TEST_CASE("unknown preset is rejected") {
  auto g = std::make_shared<Grid3>(std::array<int, 3>{8, 1, 1},
                                   std::array<double, 3>{1, 1, 1});
  Bracket b = make_bracket("hydro", g);
  State x = b.make_state();
  Constants c;
  CHECK_THROWS_AS(apply_preset(x, "nosuch", c), ValidationError);
}
