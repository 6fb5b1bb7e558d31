#include "pb/reduction.hpp"

#include <cmath>

namespace pb {

namespace {

using CSp = std::span<const double>;
using Sp = std::span<double>;

StateSchema hydro_schema() {
  return StateSchema({{"u", FieldKind::vector, -1},
                      {"rho", FieldKind::scalar, 1},
                      {"s", FieldKind::scalar, 1}});
}

void momentum_weighted_integral(const PhaseGrid& g, CSp f, int axis, Sp out) {
  // out(r) = sum_q w_q p_axis(q) f(r, q)
  const auto& pd = g.pdims();
  std::vector<double> pw(g.momentum_size());
  for (int q0 = 0; q0 < pd[0]; ++q0)
    for (int q1 = 0; q1 < pd[1]; ++q1)
      for (int q2 = 0; q2 < pd[2]; ++q2) {
        const std::array<int, 3> qi{q0, q1, q2};
        pw[(static_cast<std::size_t>(q0) * pd[1] + q1) * pd[2] + q2] =
            g.pcoord(axis, qi[axis]);
      }
  const std::size_t nm = g.momentum_size();
  const double w = g.momentum_quad_weight();
  for (std::size_t r = 0; r < g.spatial().size(); ++r) {
    double s = 0.0;
    for (std::size_t q = 0; q < nm; ++q) s += pw[q] * f[r * nm + q];
    out[r] = w * s;
  }
}

}  // namespace

ProjectionMap plasma_to_fluid(GridPtr grid, PhaseGridPtr phase,
                              const Constants& c,
                              std::function<double(double)> sigma,
                              std::function<double(double)> dsigma) {
  if (!phase) throw SchemaError("plasma_to_fluid: phase grid required");
  if (!sigma) {
    sigma = [](double f) {
      if (f == 0.0) return 0.0;
      if (!(f > 0.0))
        throw ValidationError("plasma_to_fluid: sigma needs f > 0");
      return -f * std::log(f);
    };
    dsigma = [](double f) {
      if (!(f > 0.0))
        throw ValidationError("plasma_to_fluid: sigma' needs f > 0");
      return -(std::log(f) + 1.0);
    };
  }
  if (!dsigma)
    throw SchemaError("plasma_to_fluid: custom sigma needs its derivative");

  StateSchema fine({{"f", FieldKind::phase, 0}});
  StateSchema coarse = hydro_schema();
  const double mass = c.m.at(0);

  auto project = [grid, phase, coarse, mass, sigma](const State& x) {
    State out(coarse, grid);
    CSp f = x.field("f").data();
    phase->momentum_integral(f, out.field("rho").data());
    out.field("rho").scale(mass);
    for (int a = 0; a < 3; ++a)
      momentum_weighted_integral(*phase, f, a, out.field("u").comp(a));
    std::vector<double> sf(f.size());
    for (std::size_t i = 0; i < sf.size(); ++i) sf[i] = sigma(f[i]);
    phase->momentum_integral(sf, out.field("s").data());
    return out;
  };

  auto pullback = [grid, phase, fine, project, mass,
                   dsigma](const Functional& F) {
    auto eval = [project, F](const State& x) { return F.evaluate(project(x)); };
    auto deriv = [grid, phase, fine, project, F, mass,
                  dsigma](const State& x) {
      State gc = F.derivative(project(x));
      State out(fine, grid, phase);
      Sp gf = out.field("f").data();
      CSp f = x.field("f").data();
      CSp grho = gc.field("rho").data();
      CSp gs = gc.field("s").data();
      const PhaseGrid& pg = *phase;
      const std::size_t nm = pg.momentum_size();
      const auto& pd = pg.pdims();
      std::vector<std::array<double, 3>> pcoords(nm);
      for (int q0 = 0; q0 < pd[0]; ++q0)
        for (int q1 = 0; q1 < pd[1]; ++q1)
          for (int q2 = 0; q2 < pd[2]; ++q2) {
            const std::size_t q =
                (static_cast<std::size_t>(q0) * pd[1] + q1) * pd[2] + q2;
            pcoords[q] = {pg.pcoord(0, q0), pg.pcoord(1, q1),
                          pg.pcoord(2, q2)};
          }
      for (std::size_t r = 0; r < pg.spatial().size(); ++r)
        for (std::size_t q = 0; q < nm; ++q) {
          double v = mass * grho[r] + gs[r] * dsigma(f[r * nm + q]);
          for (int a = 0; a < 3; ++a)
            v += pcoords[q][a] * gc.field("u").comp(a)[r];
          gf[r * nm + q] = v;
        }
      return out;
    };
    return Functional{F.name + "_o_plasma_to_fluid", eval, deriv};
  };

  return {"plasma_to_fluid", fine,    coarse, grid,
          phase,             project, pullback};
}

ProjectionMap momentum_shift(GridPtr grid, const Constants& c, bool invert) {
  StateSchema fine({{"u", FieldKind::vector, -1},
                    {"rho", FieldKind::scalar, 1},
                    {"s", FieldKind::scalar, 1},
                    {"E", FieldKind::vector, 1},
                    {"B", FieldKind::vector, -1}});
  StateSchema coarse({{"M", FieldKind::vector, -1},
                      {"rho", FieldKind::scalar, 1},
                      {"s", FieldKind::scalar, 1},
                      {"E", FieldKind::vector, 1},
                      {"B", FieldKind::vector, -1}});
  if (invert) std::swap(fine, coarse);
  const double sgn = invert ? -1.0 : 1.0;
  const std::string from = invert ? "M" : "u";
  const std::string to = invert ? "u" : "M";
  const double eps0 = c.eps0;

  auto shift = [eps0](State& out, const Field& E, const Field& B,
                      const std::string& mom, double sign) {
    Field& m = out.field(mom);
    for (int i = 0; i < 3; ++i) {
      const int j = (i + 1) % 3, k = (i + 2) % 3;
      Sp mi = m.comp(i);
      CSp Ej = E.comp(j), Ek = E.comp(k), Bj = B.comp(j), Bk = B.comp(k);
      for (std::size_t n = 0; n < mi.size(); ++n)
        mi[n] += sign * eps0 * (Ej[n] * Bk[n] - Ek[n] * Bj[n]);
    }
  };

  auto project = [grid, coarse, from, to, sgn, shift](const State& x) {
    State out(coarse, grid);
    out.field(to) = x.field(from);
    out.field("rho") = x.field("rho");
    out.field("s") = x.field("s");
    out.field("E") = x.field("E");
    out.field("B") = x.field("B");
    shift(out, x.field("E"), x.field("B"), to, sgn);
    return out;
  };

  auto pullback = [grid, fine, project, from, to, sgn,
                   eps0](const Functional& F) {
    auto eval = [project, F](const State& x) { return F.evaluate(project(x)); };
    auto deriv = [grid, fine, project, F, from, to, sgn, eps0](const State& x) {
      State gc = F.derivative(project(x));
      State out(fine, grid);
      out.field(from) = gc.field(to);
      out.field("rho") = gc.field("rho");
      out.field("s") = gc.field("s");
      out.field("E") = gc.field("E");
      out.field("B") = gc.field("B");
      // d(M)/d(E) adjoint: gE += sgn*eps0 (B x gM); d(M)/d(B): gB += sgn*eps0
      // (gM x E).
      const Field& gM = gc.field(to);
      const Field& E = x.field("E");
      const Field& B = x.field("B");
      for (int i = 0; i < 3; ++i) {
        const int j = (i + 1) % 3, k = (i + 2) % 3;
        Sp ge = out.field("E").comp(i);
        Sp gb = out.field("B").comp(i);
        for (std::size_t n = 0; n < ge.size(); ++n) {
          ge[n] += sgn * eps0 *
                   (B.comp(j)[n] * gM.comp(k)[n] - B.comp(k)[n] * gM.comp(j)[n]);
          gb[n] += sgn * eps0 *
                   (gM.comp(j)[n] * E.comp(k)[n] - gM.comp(k)[n] * E.comp(j)[n]);
        }
      }
      return out;
    };
    return Functional{F.name + "_o_momentum_shift", eval, deriv};
  };

  return {invert ? "momentum_shift_inverse" : "momentum_shift",
          fine,
          coarse,
          grid,
          nullptr,
          project,
          pullback};
}

ProjectionMap binary_sum(GridPtr grid) {
  StateSchema fine({{"u1", FieldKind::vector, -1},
                    {"rho1", FieldKind::scalar, 1},
                    {"s1", FieldKind::scalar, 1},
                    {"u2", FieldKind::vector, -1},
                    {"rho2", FieldKind::scalar, 1},
                    {"s2", FieldKind::scalar, 1}});
  StateSchema coarse({{"u", FieldKind::vector, -1},
                      {"rho1", FieldKind::scalar, 1},
                      {"rho2", FieldKind::scalar, 1},
                      {"s", FieldKind::scalar, 1}});
  auto project = [grid, coarse](const State& x) {
    State out(coarse, grid);
    out.field("u") = x.field("u1");
    out.field("u").axpy(1.0, x.field("u2"));
    out.field("rho1") = x.field("rho1");
    out.field("rho2") = x.field("rho2");
    out.field("s") = x.field("s1");
    out.field("s").axpy(1.0, x.field("s2"));
    return out;
  };
  auto pullback = [grid, fine, project](const Functional& F) {
    auto eval = [project, F](const State& x) { return F.evaluate(project(x)); };
    auto deriv = [grid, fine, project, F](const State& x) {
      State gc = F.derivative(project(x));
      State out(fine, grid);
      out.field("u1") = gc.field("u");
      out.field("u2") = gc.field("u");
      out.field("rho1") = gc.field("rho1");
      out.field("rho2") = gc.field("rho2");
      out.field("s1") = gc.field("s");
      out.field("s2") = gc.field("s");
      return out;
    };
    return Functional{F.name + "_o_binary_sum", eval, deriv};
  };
  return {"binary_sum", fine, coarse, grid, nullptr, project, pullback};
}

ProjectionMap total_density(GridPtr grid) {
  StateSchema fine({{"u", FieldKind::vector, -1},
                    {"rho1", FieldKind::scalar, 1},
                    {"rho2", FieldKind::scalar, 1},
                    {"s", FieldKind::scalar, 1}});
  StateSchema coarse = hydro_schema();
  auto project = [grid, coarse](const State& x) {
    State out(coarse, grid);
    out.field("u") = x.field("u");
    out.field("rho") = x.field("rho1");
    out.field("rho").axpy(1.0, x.field("rho2"));
    out.field("s") = x.field("s");
    return out;
  };
  auto pullback = [grid, fine, project](const Functional& F) {
    auto eval = [project, F](const State& x) { return F.evaluate(project(x)); };
    auto deriv = [grid, fine, project, F](const State& x) {
      State gc = F.derivative(project(x));
      State out(fine, grid);
      out.field("u") = gc.field("u");
      out.field("rho1") = gc.field("rho");
      out.field("rho2") = gc.field("rho");
      out.field("s") = gc.field("s");
      return out;
    };
    return Functional{F.name + "_o_total_density", eval, deriv};
  };
  return {"total_density", fine, coarse, grid, nullptr, project, pullback};
}

ProjectionMap identity_map(const StateSchema& schema, GridPtr grid,
                           PhaseGridPtr phase) {
  auto project = [](const State& x) { return x; };
  auto pullback = [](const Functional& F) { return F; };
  return {"identity", schema, schema, grid, phase, project, pullback};
}

ProjectionMap make_projection(const std::string& name, GridPtr grid,
                              PhaseGridPtr phase, const Constants& c) {
  if (name == "plasma_to_fluid") return plasma_to_fluid(grid, phase, c);
  if (name == "momentum_shift") return momentum_shift(grid, c, false);
  if (name == "momentum_shift_inverse") return momentum_shift(grid, c, true);
  if (name == "binary_sum") return binary_sum(grid);
  if (name == "total_density") return total_density(grid);
  throw SchemaError("unknown projection name: " + name);
}

PoissonMapReport verify_poisson_map(const ProjectionMap& map,
                                    const Bracket& fine, const Bracket& coarse,
                                    const Constants& c, int samples,
                                    double tolerance, std::uint64_t seed,
                                    const std::vector<Functional>* functionals) {
  if (!(map.fine == fine.schema()) || !(map.coarse == coarse.schema()))
    throw SchemaError("verify_poisson_map: schemas do not match the map");
  PoissonMapReport rep;
  rep.tolerance = tolerance;
  std::mt19937_64 rng(seed);

  std::vector<Functional> suite;
  if (functionals) {
    suite = *functionals;
  } else {
    suite = test_functional_suite(coarse.make_state(), seed ^ 0x9e3779b9ULL);
  }

  for (int smp = 0; smp < samples; ++smp) {
    State x = fine.make_state();
    randomize_state(x, 1, 0.2, rng);
    if (map.phase)
      rep.boundary_mass = std::max(
          rep.boundary_mass, map.phase->boundary_mass(x.field(0).data()));
    const State px = map.project(x);
    for (const auto& F : suite)
      for (const auto& H : suite) {
        const Functional Ff = map.pullback(F);
        const Functional Hf = map.pullback(H);
        const double coarse_val =
            coarse.value(c, px, F.derivative(px), H.derivative(px));
        const double fine_val =
            fine.value(c, x, Ff.derivative(x), Hf.derivative(x));
        const double res =
            std::abs(coarse_val - fine_val) / (1.0 + std::abs(coarse_val));
        rep.max_residual = std::max(rep.max_residual, res);
      }
  }
  rep.pass = rep.max_residual < tolerance;
  return rep;
}

}  // namespace pb
