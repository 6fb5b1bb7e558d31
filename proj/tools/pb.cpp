// pb: verification campaigns, simulations, bracket composition, reduction
// maps and reciprocity reports from the command line.
#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <random>

#include "pb/dense.hpp"
#include "pb/dynamics.hpp"
#include "pb/errors.hpp"
#include "pb/liealg.hpp"
#include "pb/ocrr.hpp"
#include "pb/plot.hpp"
#include "pb/presets.hpp"
#include "pb/reduction.hpp"
#include "pb/snapshot.hpp"
#include "pb/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitBlowup = 3;
constexpr int kExitCompat = 4;
constexpr int kExitParity = 5;

bool is_kinetic(const std::string& name) {
  return name == "vlasov" || name == "ked" || name == "ked_binary";
}

pb::Constants constants_for(const std::string& name) {
  pb::Constants c;
  if (name == "ked_binary" || name == "bemhd" || name == "cbemhd") {
    c.m = {1.0, 1.0};
    c.z = {1.0, -1.0};
  }
  return c;
}

bool known_bracket(const std::string& name) {
  const auto names = pb::bracket_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

pb::Bracket build_bracket(const std::string& name, int n) {
  auto grid = std::make_shared<pb::Grid3>(
      std::array<int, 3>{n, 1, 1},
      std::array<double, 3>{2.0 * 3.14159265358979323846, 1.0, 1.0});
  pb::PhaseGridPtr phase;
  if (is_kinetic(name))
    phase = std::make_shared<pb::PhaseGrid>(*grid, std::array<int, 3>{n, 1, 1},
                                            std::array<double, 3>{4.0, 4.0, 4.0});
  return pb::make_bracket(name, grid, phase);
}

int print_checks(const std::string& label,
                 const std::vector<pb::CheckResult>& checks) {
  bool all = true;
  for (const auto& c : checks) {
    std::printf("%-14s %-24s %12.3e %10.1e  %s\n", label.c_str(),
                c.name.c_str(), c.residual, c.tolerance,
                c.pass ? "PASS" : "FAIL");
    all = all && c.pass;
  }
  return all ? kExitOk : 1;
}

int cmd_verify(const std::string& bracket, bool all, int grid_n,
               std::uint64_t seed) {
  std::vector<std::string> names;
  if (all)
    names = pb::bracket_names();
  else if (known_bracket(bracket))
    names = {bracket};
  else {
    std::fprintf(stderr, "unknown bracket '%s'\n", bracket.c_str());
    return kExitUsage;
  }
  int rc = kExitOk;
  for (const auto& name : names) {
    const pb::Bracket b = build_bracket(name, grid_n);
    rc |= print_checks(name, pb::verify_bracket(b, constants_for(name), seed));
  }
  return rc == kExitOk ? kExitOk : 1;
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir) {
  const pb::Config cfg = pb::Config::load(config_path);
  const pb::RunConfig rc = pb::run_config_from(cfg);
  if (!known_bracket(rc.bracket)) {
    std::fprintf(stderr, "unknown bracket '%s'\n", rc.bracket.c_str());
    return kExitUsage;
  }
  pb::RunResult res;
  try {
    res = pb::run(rc);
  } catch (const pb::BlowupError& e) {
    std::fprintf(stderr, "blow-up at step %ld: %s\n", e.step, e.what());
    return kExitBlowup;
  }
  std::filesystem::create_directories(out_dir);
  pb::write_csv(out_dir + "/series.csv", res);
  pb::save_state(out_dir + "/final.pbstate", res.final_state);

  // Monitors vs time, relative to their initial values where sensible.
  std::vector<double> ts;
  for (const auto& row : res.rows) ts.push_back(row[1]);
  std::vector<std::pair<std::string, std::vector<double>>> series;
  for (std::size_t col = 2; col < res.columns.size(); ++col) {
    std::vector<double> ys;
    const double y0 = res.rows.front()[col];
    for (const auto& row : res.rows)
      ys.push_back(std::abs(y0) > 1e-14 ? row[col] / y0 - 1.0 : row[col]);
    series.emplace_back(res.columns[col], std::move(ys));
  }
  pb::write_svg_plot(out_dir + "/monitors.svg",
                     rc.bracket + " run: monitor drift", "time", ts, series);

  const double e0 = res.rows.front()[2];
  const double e1 = res.rows.back()[2];
  std::printf("steps=%ld dt=%.6g final_time=%.6g\n", rc.steps, res.dt,
              res.final_time);
  std::printf("energy drift (relative) = %.3e\n",
              std::abs(e1 - e0) / (1.0 + std::abs(e0)));
  if (rc.preset == "maxwell_planewave") {
    pb::State ref = res.final_state;
    ref.fill(0.0);
    pb::maxwell_planewave_fill(ref, rc.constants, res.final_time,
                               rc.amplitude);
    ref.axpy(-1.0, res.final_state);
    std::printf("plane-wave L2 error vs analytic = %.3e\n", pb::norm(ref));
  }
  std::printf("wrote %s/series.csv, final.pbstate, monitors.svg\n",
              out_dir.c_str());
  return kExitOk;
}

int cmd_compose(const std::string& spec_path, int grid_n,
                std::uint64_t seed) {
  const pb::Config cfg = pb::Config::load(spec_path);
  const std::string kind = cfg.get_or("compose", "kind", "");
  pb::Constants consts;

  if (kind == "matched_pair") {
    pb::MatchedPairSpec mp = [&] {
      try {
        return pb::MatchedPairSpec::from_config(cfg);
      } catch (const pb::ValidationError& e) {
        std::fprintf(stderr, "compatibility failure: %s\n", e.what());
        std::exit(kExitCompat);
      }
    }();
    const auto [r1, r2] = mp.compatibility_residuals();
    std::printf("compatibility residuals: %.3e %.3e\n", r1, r2);
    const pb::LieAlgebra alg = pb::matched_pair_algebra(mp);
    const double jac = alg.jacobi_residual();
    std::printf("matched-pair algebra dim %d, Jacobi residual %.3e  %s\n",
                alg.dim(), jac, jac <= 1e-12 ? "PASS" : "FAIL");
    return jac <= 1e-12 ? kExitOk : 1;
  }

  if (kind == "direct" || kind == "semidirect") {
    auto grid = std::make_shared<pb::Grid3>(
        std::array<int, 3>{grid_n, 1, 1},
        std::array<double, 3>{2.0 * 3.14159265358979323846, 1.0, 1.0});
    std::unique_ptr<pb::Bracket> built;
    if (kind == "direct") {
      const std::string an = cfg.get("compose", "a");
      const std::string bn = cfg.get("compose", "b");
      if (!known_bracket(an) || !known_bracket(bn)) return kExitUsage;
      pb::Bracket a = pb::make_bracket(an, grid);
      pb::Bracket b = pb::make_bracket(bn, grid);
      auto rename_of = [&](const std::string& key, const pb::Bracket& src) {
        std::map<std::string, std::string> m;
        for (const auto& v : cfg.get_all("compose", key)) {
          const auto tok = pb::split_tokens(v);
          if (tok.size() != 2) throw pb::ValidationError("bad rename: " + v);
          m[tok[0]] = tok[1];
        }
        return m.empty() ? src : pb::renamed(src, m, src.name() + "'");
      };
      built = std::make_unique<pb::Bracket>(pb::direct_product(
          rename_of("rename_a", a), rename_of("rename_b", b)));
    } else {
      const std::string momentum = cfg.get_or("compose", "momentum", "m");
      std::vector<pb::Attachment> atts;
      for (const auto& v : cfg.get_all("compose", "attach")) {
        const auto tok = pb::split_tokens(v);
        pb::Attachment a;
        if (tok.size() == 2 && tok[0] == "density") {
          a.kind = pb::Attachment::Kind::advected_density;
          a.name = tok[1];
          a.parity = 1;
        } else if (tok.size() == 4 && tok[0] == "cotangent") {
          a.kind = pb::Attachment::Kind::cotangent_pair;
          a.name = tok[1];
          a.dual = tok[2];
          a.kappa = std::stod(tok[3]);
          a.parity = 0;
        } else {
          throw pb::ValidationError("bad attach spec: " + v);
        }
        atts.push_back(a);
      }
      built = std::make_unique<pb::Bracket>(pb::semidirect_vector(
          pb::momentum_bracket(grid, momentum), momentum, atts, "composed"));
    }

    int rc = print_checks("composed", pb::verify_bracket(*built, consts, seed));

    const std::string compare = cfg.get_or("compose", "compare", "");
    if (!compare.empty()) {
      if (!known_bracket(compare)) return kExitUsage;
      const pb::Bracket ref = pb::make_bracket(compare, grid);
      std::mt19937_64 rng(seed);
      pb::State x = built->make_state();
      double worst = 0.0;
      for (int t = 0; t < 3; ++t) {
        pb::randomize_state(x, 1, 0.2, rng);
        pb::State d = built->make_state();
        pb::randomize_state(d, 1, 0.5, rng);
        pb::State va = built->apply(consts, x, d);
        va.axpy(-1.0, ref.apply(consts, x, d));
        for (std::size_t i = 0; i < va.ncoeffs(); ++i)
          worst = std::max(worst, std::abs(va.coeff(i)));
      }
      std::printf("equivalence to catalog %s: max residual %.3e  %s\n",
                  compare.c_str(), worst, worst <= 1e-12 ? "PASS" : "FAIL");
      if (worst > 1e-12) rc = 1;
    }
    return rc;
  }

  std::fprintf(stderr, "compose: unknown kind '%s'\n", kind.c_str());
  return kExitUsage;
}

int cmd_ocrr(const std::string& bracket, int grid_n, std::uint64_t seed,
             const std::string& csv_path) {
  if (!known_bracket(bracket)) {
    std::fprintf(stderr, "unknown bracket '%s'\n", bracket.c_str());
    return kExitUsage;
  }
  const pb::Bracket b = build_bracket(bracket, grid_n);
  const pb::Constants c = constants_for(bracket);
  for (const auto& e : b.schema().entries())
    if (e.parity == 0) {
      std::fprintf(stderr,
                   "bracket '%s': field '%s' has no parity assignment\n",
                   bracket.c_str(), e.name.c_str());
      return kExitParity;
    }
  std::mt19937_64 rng(seed);
  pb::State x = b.make_state();
  bool all = true;
  std::string csv = "state,block_i,block_j,parity_product,residual_reversal,"
                    "residual_dressed,verdict\n";
  for (int s = 0; s < 3; ++s) {
    pb::randomize_state(x, 1, 0.2, rng);
    const pb::ParityReport rep = pb::check_bivector_parity(b, c, x);
    for (const auto& blk : rep.blocks) {
      std::printf("%-10s %-6s %-6s %+d  %12.3e %12.3e  %s\n", bracket.c_str(),
                  blk.field_i.c_str(), blk.field_j.c_str(),
                  blk.parity_product, blk.residual_reversal,
                  blk.residual_dressed, blk.pass ? "PASS" : "FAIL");
      char line[256];
      std::snprintf(line, sizeof line, "%d,%s,%s,%d,%.17g,%.17g,%s\n", s,
                    blk.field_i.c_str(), blk.field_j.c_str(),
                    blk.parity_product, blk.residual_reversal,
                    blk.residual_dressed, blk.pass ? "PASS" : "FAIL");
      csv += line;
      all = all && blk.pass;
    }
  }
  if (!csv_path.empty()) {
    std::FILE* f = std::fopen(csv_path.c_str(), "wb");
    if (!f) throw pb::ValidationError("cannot open " + csv_path);
    std::fwrite(csv.data(), 1, csv.size(), f);
    std::fclose(f);
  }
  return all ? kExitOk : 1;
}

int cmd_project(const std::string& map_name, const std::string& fine_name,
                const std::string& coarse_name, int grid_n,
                std::uint64_t seed) {
  if (!known_bracket(fine_name) || !known_bracket(coarse_name)) {
    std::fprintf(stderr, "unknown bracket name\n");
    return kExitUsage;
  }
  auto grid = std::make_shared<pb::Grid3>(
      std::array<int, 3>{grid_n, 1, 1},
      std::array<double, 3>{2.0 * 3.14159265358979323846, 1.0, 1.0});
  pb::PhaseGridPtr phase;
  if (is_kinetic(fine_name))
    phase = std::make_shared<pb::PhaseGrid>(
        *grid, std::array<int, 3>{32, 1, 1}, std::array<double, 3>{6, 6, 6});
  pb::Constants c;
  try {
    const pb::Bracket fine = pb::make_bracket(fine_name, grid, phase);
    const pb::Bracket coarse = pb::make_bracket(coarse_name, grid);
    const pb::ProjectionMap map =
        pb::make_projection(map_name, grid, phase, c);
    const double tol = map_name == "plasma_to_fluid" ? 1e-5 : 1e-8;
    const pb::PoissonMapReport rep =
        pb::verify_poisson_map(map, fine, coarse, c, 3, tol, seed);
    std::printf("map=%s fine=%s coarse=%s\n", map_name.c_str(),
                fine_name.c_str(), coarse_name.c_str());
    std::printf("max residual %.3e (tol %.1e), boundary mass %.3e  %s\n",
                rep.max_residual, rep.tolerance, rep.boundary_mass,
                rep.pass ? "PASS" : "FAIL");
    return rep.pass ? kExitOk : 1;
  } catch (const pb::SchemaError& e) {
    std::fprintf(stderr, "schema mismatch: %s\n", e.what());
    return kExitUsage;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Poisson bracket toolbox"};
  app.require_subcommand(1);

  std::string bracket, config_path, out_dir = "out", spec_path, csv_path;
  std::string map_name, fine_name, coarse_name;
  bool all = false;
  int grid_n = 6;
  std::uint64_t seed = 2026;

  auto* verify = app.add_subcommand("verify", "bracket identity checks");
  verify->add_option("--bracket", bracket, "catalog bracket name");
  verify->add_flag("--all", all, "verify the whole catalog");
  verify->add_option("--grid", grid_n, "points per axis (1D verify grid)");
  verify->add_option("--seed", seed, "rng seed");

  auto* simulate = app.add_subcommand("simulate", "integrate a configured run");
  simulate->add_option("--config", config_path, "run config file")->required();
  simulate->add_option("--out", out_dir, "output directory");

  auto* compose = app.add_subcommand("compose", "build and verify a composite");
  compose->add_option("--spec", spec_path, "composition spec file")->required();
  compose->add_option("--grid", grid_n, "points per axis");
  compose->add_option("--seed", seed, "rng seed");

  auto* ocrr = app.add_subcommand("ocrr", "reciprocity (parity) report");
  ocrr->add_option("--bracket", bracket, "catalog bracket name")->required();
  ocrr->add_option("--grid", grid_n, "points per axis");
  ocrr->add_option("--seed", seed, "rng seed");
  ocrr->add_option("--csv", csv_path, "also write the report as CSV");

  auto* project = app.add_subcommand("project", "Poisson map verification");
  project->add_option("--map", map_name, "projection name")->required();
  project->add_option("--fine", fine_name, "fine bracket")->required();
  project->add_option("--coarse", coarse_name, "coarse bracket")->required();
  project->add_option("--grid", grid_n, "points per axis");
  project->add_option("--seed", seed, "rng seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (verify->parsed()) {
      if (!all && bracket.empty()) {
        std::fprintf(stderr, "verify: need --bracket or --all\n");
        return kExitUsage;
      }
      return cmd_verify(bracket, all, grid_n, seed);
    }
    if (simulate->parsed()) return cmd_simulate(config_path, out_dir);
    if (compose->parsed()) return cmd_compose(spec_path, grid_n, seed);
    if (ocrr->parsed()) return cmd_ocrr(bracket, grid_n, seed, csv_path);
    if (project->parsed())
      return cmd_project(map_name, fine_name, coarse_name, grid_n, seed);
  } catch (const pb::BlowupError& e) {
    std::fprintf(stderr, "blow-up at step %ld: %s\n", e.step, e.what());
    return kExitBlowup;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}
