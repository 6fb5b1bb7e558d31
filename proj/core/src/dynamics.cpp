#include "pb/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <memory>

#include "pb/errors.hpp"
#include "pb/presets.hpp"

namespace pb {

State step_rk4(const Bracket& b, const Constants& c, const Functional& H,
               const State& x, double dt, long step_index) {
  auto rhs = [&](const State& y) { return b.apply(c, y, H.derivative(y)); };

  State k1 = rhs(x);
  State y = x;
  y.axpy(0.5 * dt, k1);
  State k2 = rhs(y);
  y = x;
  y.axpy(0.5 * dt, k2);
  State k3 = rhs(y);
  y = x;
  y.axpy(dt, k3);
  State k4 = rhs(y);

  State out = x;
  out.axpy(dt / 6.0, k1);
  out.axpy(dt / 3.0, k2);
  out.axpy(dt / 3.0, k3);
  out.axpy(dt / 6.0, k4);
  if (!out.finite())
    throw BlowupError(step_index, "non-finite state after RK4 step " +
                                      std::to_string(step_index));
  return out;
}

std::vector<Functional> casimir_suite(const State& prototype) {
  std::vector<Functional> out;
  for (std::size_t i = 0; i < prototype.nfields(); ++i) {
    const auto& e = prototype.schema().entries()[i];
    const std::string name = e.name;
    if (e.kind == FieldKind::scalar) {
      out.push_back(Functional{
          "int_" + name,
          [name](const State& x) {
            const Field& f = x.field(name);
            return f.grid()->integrate(f.data());
          },
          [name](const State& x) {
            State g = x;
            g.fill(0.0);
            g.field(name).fill(1.0);
            return g;
          }});
    } else if (e.kind == FieldKind::phase) {
      for (int power = 1; power <= 3; ++power) {
        std::string fname = "int_" + name;
        if (power > 1) fname += std::to_string(power);
        out.push_back(Functional{
            fname,
            [name, power](const State& x) {
              const Field& f = x.field(name);
              const PhaseGrid& pg = *f.phase_grid();
              double acc = 0.0;
              for (double v : f.data()) {
                double t = v;
                for (int k = 1; k < power; ++k) t *= v;
                acc += t;
              }
              return acc * pg.quad_weight();
            },
            [name, power](const State& x) {
              State g = x;
              g.fill(0.0);
              auto src = x.field(name).data();
              auto dst = g.field(name).data();
              for (std::size_t k = 0; k < src.size(); ++k) {
                double t = static_cast<double>(power);
                for (int j = 1; j < power; ++j) t *= src[k];
                dst[k] = t;
              }
              return g;
            }});
      }
    }
  }
  return out;
}

RunConfig run_config_from(const Config& cfg) {
  RunConfig rc;
  rc.bracket = cfg.get_or("run", "bracket", rc.bracket);
  rc.preset = cfg.get_or("run", "preset", rc.preset);
  rc.amplitude = cfg.get_double("run", "amplitude", rc.amplitude);
  rc.seed = static_cast<std::uint64_t>(
      cfg.get_int("run", "seed", static_cast<long>(rc.seed)));
  rc.dt = cfg.get_double("run", "dt", rc.dt);
  rc.steps = cfg.get_int("run", "steps", rc.steps);
  rc.stride = cfg.get_int("run", "stride", rc.stride);
  rc.eos_K = cfg.get_double("run", "eos_K", rc.eos_K);
  rc.eos_gamma = cfg.get_double("run", "eos_gamma", rc.eos_gamma);
  rc.eos_cv = cfg.get_double("run", "eos_cv", rc.eos_cv);
  rc.interaction_alpha =
      cfg.get_double("run", "interaction_alpha", rc.interaction_alpha);
  for (int a = 0; a < 3; ++a) {
    const std::string ax = std::to_string(a + 1);
    rc.dims[a] = static_cast<int>(
        cfg.get_int("grid", "n" + ax, rc.dims[a]));
    rc.lengths[a] = cfg.get_double("grid", "L" + ax, rc.lengths[a]);
    rc.pdims[a] = static_cast<int>(
        cfg.get_int("grid", "np" + ax, rc.pdims[a]));
    rc.pmax[a] = cfg.get_double("grid", "pmax" + ax, rc.pmax[a]);
  }
  rc.constants.eps0 = cfg.get_double("constants", "eps0", 1.0);
  rc.constants.mu0 = cfg.get_double("constants", "mu0", 1.0);
  rc.constants.e = cfg.get_double("constants", "e", 1.0);
  if (cfg.has("constants", "m")) rc.constants.m = cfg.get_doubles("constants", "m");
  if (cfg.has("constants", "z")) rc.constants.z = cfg.get_doubles("constants", "z");
  return rc;
}

RunResult run(const RunConfig& rc) {
  rc.constants.validate();
  if (rc.steps < 1) throw ValidationError("run: steps must be >= 1");
  if (rc.stride < 1) throw ValidationError("run: stride must be >= 1");

  auto grid = std::make_shared<Grid3>(rc.dims, rc.lengths);
  const bool kinetic = rc.bracket == "vlasov" || rc.bracket == "ked" ||
                       rc.bracket == "ked_binary";
  PhaseGridPtr phase;
  if (kinetic)
    phase = std::make_shared<PhaseGrid>(*grid, rc.pdims, rc.pmax);

  const Bracket b = make_bracket(rc.bracket, grid, phase);
  State x = b.make_state();
  apply_preset(x, rc.preset, rc.constants, rc.amplitude, rc.seed);

  const Eos eos = eos_ideal(rc.eos_K, rc.eos_gamma, rc.eos_cv);
  const Functional H = make_hamiltonian(rc.bracket, rc.constants, x, eos,
                                        rc.interaction_alpha);
  const auto casimirs = casimir_suite(x);

  double dt = rc.dt;
  if (dt <= 0.0) {
    double hmin = std::numeric_limits<double>::infinity();
    for (int a = 0; a < 3; ++a)
      if (grid->dims()[a] > 1) hmin = std::min(hmin, grid->spacing(a));
    if (!std::isfinite(hmin)) hmin = grid->spacing(0);
    dt = 0.1 * hmin / std::sqrt(rc.constants.c2());
  }

  RunResult res;
  res.dt = dt;
  res.columns = {"step", "time", "energy"};
  for (const auto& f : casimirs) res.columns.push_back("monitor:" + f.name);
  for (const auto& con : b.constraints())
    res.columns.push_back("constraint:" + con.name);

  auto record = [&](long step, const State& y) {
    std::vector<double> row;
    row.reserve(res.columns.size());
    row.push_back(static_cast<double>(step));
    row.push_back(step * dt);
    row.push_back(H.evaluate(y));
    for (const auto& f : casimirs) row.push_back(f.evaluate(y));
    for (const auto& con : b.constraints()) {
      double mx = 0.0;
      for (double v : con.residual(rc.constants, y))
        mx = std::max(mx, std::abs(v));
      row.push_back(mx);
    }
    res.rows.push_back(std::move(row));
  };

  record(0, x);
  for (long step = 1; step <= rc.steps; ++step) {
    x = step_rk4(b, rc.constants, H, x, dt, step);
    if (step % rc.stride == 0 || step == rc.steps) record(step, x);
  }
  res.final_state = x;
  res.final_time = rc.steps * dt;
  return res;
}

std::string csv_text(const RunResult& r) {
  std::string out;
  for (std::size_t i = 0; i < r.columns.size(); ++i) {
    if (i) out += ",";
    out += r.columns[i];
  }
  out += "\n";
  char buf[40];
  for (const auto& row : r.rows) {
    // First column is the integer step count.
    std::snprintf(buf, sizeof buf, "%ld", static_cast<long>(row[0]));
    out += buf;
    for (std::size_t i = 1; i < row.size(); ++i) {
      std::snprintf(buf, sizeof buf, ",%.17g", row[i]);
      out += buf;
    }
    out += "\n";
  }
  return out;
}

void write_csv(const std::string& path, const RunResult& r) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("csv: cannot open '" + path + "'");
  f << csv_text(r);
}

}  // namespace pb
