#include "pb/presets.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "pb/errors.hpp"
#include "pb/functional.hpp"

namespace pb {
namespace {

bool has_field(const State& x, const std::string& name) {
  return x.schema().index_of(name) >= 0;
}

void require_field(const State& x, const std::string& name,
                   const std::string& preset) {
  if (!has_field(x, name))
    throw ValidationError("preset '" + preset + "' needs a field named '" +
                          name + "'");
}

void fill_uniform(State& x) {
  x.fill(0.0);
  for (std::size_t i = 0; i < x.nfields(); ++i) {
    const auto& e = x.schema().entries()[i];
    Field& f = x.field(static_cast<int>(i));
    if (e.kind == FieldKind::phase) {
      // Spatially uniform positive density decaying toward the momentum
      // boundary; amp = 0 keeps fill_band_limited_phase's envelope only.
      std::mt19937_64 rng(0);
      fill_band_limited_phase(f.data(), *f.phase_grid(), 0, 1.0, 0.0, rng);
    } else if (e.kind == FieldKind::scalar &&
               (e.name.rfind("rho", 0) == 0 || e.name.rfind("s", 0) == 0)) {
      f.fill(1.0);
    }
  }
}

void fill_mhd_smooth(State& x, double amplitude) {
  fill_uniform(x);
  const Grid3& g = *x.grid();
  const double k = 2.0 * std::numbers::pi / g.lengths()[0];
  Field& rho = x.field("rho");
  Field& s = x.field("s");
  Field& B = x.field("B");
  Field& M = x.field(has_field(x, "M") ? "M" : "u");
  for (int i = 0; i < g.dims()[0]; ++i) {
    const double cx = std::cos(k * g.coord(0, i));
    const double sx = std::sin(k * g.coord(0, i));
    for (int j = 0; j < g.dims()[1]; ++j)
      for (int kk = 0; kk < g.dims()[2]; ++kk) {
        const std::size_t idx = g.index(i, j, kk);
        rho.data()[idx] = 1.0 + 2.0 * amplitude * cx;
        s.data()[idx] = 1.0 + amplitude * sx;
        M.comp(0)[idx] = amplitude * sx;
        // B = B(x) e_y is solenoidal identically.
        B.comp(1)[idx] = amplitude * cx;
      }
  }
}

}  // namespace

void maxwell_planewave_fill(State& x, const Constants& c, double t,
                            double amplitude) {
  require_field(x, "E", "maxwell_planewave");
  require_field(x, "B", "maxwell_planewave");
  const Grid3& g = *x.grid();
  const double k = 2.0 * std::numbers::pi / g.lengths()[0];
  const double cl = std::sqrt(c.c2());
  Field& E = x.field("E");
  Field& B = x.field("B");
  for (int i = 0; i < g.dims()[0]; ++i) {
    const double phase = std::cos(k * (g.coord(0, i) - cl * t));
    for (int j = 0; j < g.dims()[1]; ++j)
      for (int kk = 0; kk < g.dims()[2]; ++kk) {
        const std::size_t idx = g.index(i, j, kk);
        E.comp(1)[idx] = amplitude * phase;
        B.comp(2)[idx] = amplitude / cl * phase;
      }
  }
}

void apply_preset(State& x, const std::string& name, const Constants& c,
                  double amplitude, std::uint64_t seed) {
  if (name == "zero") {
    x.fill(0.0);
  } else if (name == "uniform") {
    fill_uniform(x);
  } else if (name == "random") {
    std::mt19937_64 rng(seed);
    randomize_state(x, 1, amplitude, rng);
  } else if (name == "maxwell_planewave") {
    x.fill(0.0);
    maxwell_planewave_fill(x, c, 0.0, amplitude);
  } else if (name == "mhd_smooth") {
    require_field(x, "rho", name);
    require_field(x, "s", name);
    require_field(x, "B", name);
    if (!has_field(x, "M") && !has_field(x, "u"))
      throw ValidationError("preset 'mhd_smooth' needs a momentum variable");
    fill_mhd_smooth(x, amplitude);
  } else {
    throw ValidationError("unknown preset '" + name + "'");
  }
}

std::vector<std::string> preset_names() {
  return {"zero", "uniform", "random", "maxwell_planewave", "mhd_smooth"};
}

}  // namespace pb
