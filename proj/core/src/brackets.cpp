#include "pb/bracket.hpp"

#include <cmath>
#include <memory>

namespace pb {

namespace {

using CSp = std::span<const double>;
using Sp = std::span<double>;

std::vector<double> vderiv(const Grid3& g, CSp f, int axis) {
  std::vector<double> out(f.size());
  g.derivative(f, out, axis);
  return out;
}

std::vector<double> pderiv(const PhaseGrid& g, CSp f, Axis axis) {
  std::vector<double> out(f.size());
  g.derivative(f, out, axis);
  return out;
}

void acc(Sp y, double a, CSp x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

std::vector<double> product(CSp a, CSp b) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

/// out += coef * D_axis(a*b)
void acc_deriv_product(const Grid3& g, CSp a, CSp b, int axis, double coef,
                       Sp out) {
  acc(out, coef, vderiv(g, product(a, b), axis));
}

/// out += coef * a * D_axis(b)
void acc_mul_deriv(const Grid3& g, CSp a, CSp b, int axis, double coef,
                   Sp out) {
  auto d = vderiv(g, b, axis);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += coef * a[i] * d[i];
}

/// out += coef * curl(v)
void acc_curl(const Grid3& g, const Field& v, double coef, Field& out) {
  // (curl v)_i = eps_{ijk} d_j v_k
  acc(out.comp(0), coef, vderiv(g, v.comp(2), 1));
  acc(out.comp(0), -coef, vderiv(g, v.comp(1), 2));
  acc(out.comp(1), coef, vderiv(g, v.comp(0), 2));
  acc(out.comp(1), -coef, vderiv(g, v.comp(2), 0));
  acc(out.comp(2), coef, vderiv(g, v.comp(1), 0));
  acc(out.comp(2), -coef, vderiv(g, v.comp(0), 1));
}

std::vector<double> divergence(const Grid3& g, const Field& v) {
  std::vector<double> out(g.size(), 0.0);
  for (int a = 0; a < 3; ++a) acc(out, 1.0, vderiv(g, v.comp(a), a));
  return out;
}

/// out_c += coef * (a x b)_c for one component c.
void acc_cross_comp(int c, CSp a0, CSp a1, CSp a2, CSp b0, CSp b1, CSp b2,
                    double coef, Sp out) {
  CSp aj = c == 0 ? a1 : (c == 1 ? a2 : a0);
  CSp ak = c == 0 ? a2 : (c == 1 ? a0 : a1);
  CSp bj = c == 0 ? b1 : (c == 1 ? b2 : b0);
  CSp bk = c == 0 ? b2 : (c == 1 ? b0 : b1);
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] += coef * (aj[i] * bk[i] - ak[i] * bj[i]);
}

void acc_cross(const Field& a, const Field& b, double coef, Field& out) {
  for (int c = 0; c < 3; ++c)
    acc_cross_comp(c, a.comp(0), a.comp(1), a.comp(2), b.comp(0), b.comp(1),
                   b.comp(2), coef, out.comp(c));
}

// ---- evolution blocks (derivatives act on dH and state fields only) ----

/// Vector-field-dual self coupling: out_i += -d_j(m_i g_j) - m_j d_i(g_j).
void momentum_self(const Grid3& g, const Field& m, const Field& gm,
                   Field& out) {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      acc_deriv_product(g, m.comp(i), gm.comp(j), j, -1.0, out.comp(i));
      acc_mul_deriv(g, m.comp(j), gm.comp(j), i, -1.0, out.comp(i));
    }
}

/// Advected scalar density: adot += -d_j(a g_j); out_m_i += -a d_i(ga).
void advect_density(const Grid3& g, CSp a, const Field& gm, CSp ga, Sp out_a,
                    Field& out_m) {
  for (int j = 0; j < 3; ++j) {
    acc_deriv_product(g, a, gm.comp(j), j, -1.0, out_a);
    acc_mul_deriv(g, a, ga, j, -1.0, out_m.comp(j));
  }
}

/// Maxwell block: Edot += (1/eps0) curl gB, Bdot += -(1/eps0) curl gE.
void em_block(const Constants& c, const Grid3& g, const Field& gE,
              const Field& gB, Field& outE, Field& outB) {
  acc_curl(g, gB, 1.0 / c.eps0, outE);
  acc_curl(g, gE, -1.0 / c.eps0, outB);
}

/// Magnetic (vector-field) coupling of mhd:
///   Bdot_i += -d_j(B_i gM_j) + d_j(B_j gM_i)   (= curl(gM x B))
///   Mdot_i += B_j d_j(gB_i) - B_j d_i(gB_j).
void magnetic_block(const Grid3& g, const Field& B, const Field& gM,
                    const Field& gB, Field& outM, Field& outB) {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      acc_deriv_product(g, B.comp(i), gM.comp(j), j, -1.0, outB.comp(i));
      acc_deriv_product(g, B.comp(j), gM.comp(i), j, 1.0, outB.comp(i));
      acc_mul_deriv(g, B.comp(j), gB.comp(i), j, 1.0, outM.comp(i));
      acc_mul_deriv(g, B.comp(j), gB.comp(j), i, -1.0, outM.comp(i));
    }
}

/// One-form coupling of ehd:
///   Edot_i += -d_j(E_i gM_j) + E_j d_j(gM_i)
///   Mdot_i += -E_j d_i(gE_j) + d_j(E_j gE_i).
void oneform_block(const Grid3& g, const Field& E, const Field& gM,
                   const Field& gE, Field& outM, Field& outE) {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      acc_deriv_product(g, E.comp(i), gM.comp(j), j, -1.0, outE.comp(i));
      acc_mul_deriv(g, E.comp(j), gM.comp(i), j, 1.0, outE.comp(i));
      acc_mul_deriv(g, E.comp(j), gE.comp(j), i, -1.0, outM.comp(i));
      acc_deriv_product(g, E.comp(j), gE.comp(i), j, 1.0, outM.comp(i));
    }
}

/// Kinetic (symplectic-volume) block:
///   fdot += -d_{r_i}(f d_{p_i} gf) + d_{p_i}(f d_{r_i} gf).
void vlasov_block(const PhaseGrid& g, CSp f, CSp gf, Sp out) {
  for (int i = 0; i < 3; ++i) {
    const Axis r = static_cast<Axis>(i);
    const Axis p = static_cast<Axis>(i + 3);
    auto a = product(f, pderiv(g, gf, p));
    acc(out, -1.0, pderiv(g, a, r));
    auto b = product(f, pderiv(g, gf, r));
    acc(out, 1.0, pderiv(g, b, p));
  }
}

void broadcast(const PhaseGrid& g, CSp spatial, Sp phase_out) {
  const std::size_t nm = g.momentum_size();
  for (std::size_t r = 0; r < g.spatial().size(); ++r)
    for (std::size_t q = 0; q < nm; ++q) phase_out[r * nm + q] = spatial[r];
}

/// Charge coupling of kinetic electrodynamics for one species:
///   fdot += -(ze/eps0) d_{p_i}f E^H_i          (E^H = gE broadcast)
///   fdot += -(ze)      d_{p_i}( f (d_p gf x B)_i )
///   Edot_i += (ze/eps0) int dp d_{p_i}f gf.
void ked_coupling(const Constants& c, int species, const PhaseGrid& pg,
                  CSp f, CSp gf, const Field& B, const Field& gE, Sp outf,
                  Field& outE) {
  const double ze = c.z[species] * c.e;
  std::vector<double> bc(pg.size()), spatial(pg.spatial().size());
  std::array<std::vector<double>, 3> dpf;
  for (int i = 0; i < 3; ++i)
    dpf[i] = pderiv(pg, f, static_cast<Axis>(i + 3));

  for (int i = 0; i < 3; ++i) {
    broadcast(pg, gE.comp(i), bc);
    for (std::size_t k = 0; k < outf.size(); ++k)
      outf[k] += -(ze / c.eps0) * dpf[i][k] * bc[k];
    auto fg = product(dpf[i], gf);
    pg.momentum_integral(fg, spatial);
    acc(outE.comp(i), ze / c.eps0, spatial);
  }

  // Magnetic term: flux_i = f (d_p gf x B)_i, fdot += -ze d_{p_i} flux_i.
  std::array<std::vector<double>, 3> dpg, Bb;
  for (int i = 0; i < 3; ++i) {
    dpg[i] = pderiv(pg, gf, static_cast<Axis>(i + 3));
    Bb[i].resize(pg.size());
    broadcast(pg, B.comp(i), Bb[i]);
  }
  std::vector<double> flux(pg.size());
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3, k = (i + 2) % 3;
    for (std::size_t n = 0; n < flux.size(); ++n)
      flux[n] = f[n] * (dpg[j][n] * Bb[k][n] - dpg[k][n] * Bb[j][n]);
    acc(outf, -ze, pderiv(pg, flux, static_cast<Axis>(i + 3)));
  }
}

/// Fluid charge coupling for one species (velocity form):
///   udot_i += (ze/(m eps0)) rho gE_i + (ze/m) rho (gu x B)_i
///   Edot_i += -(ze/(m eps0)) rho gu_i.
void fluid_charge_coupling(const Constants& c, int species, const Grid3& g,
                           CSp rho, const Field& B, const Field& gu,
                           const Field& gE, Field& outu, Field& outE) {
  const double zem = c.z[species] * c.e / c.m[species];
  for (int i = 0; i < 3; ++i) {
    Sp ou = outu.comp(i);
    Sp oe = outE.comp(i);
    CSp ge = gE.comp(i);
    CSp gui = gu.comp(i);
    for (std::size_t n = 0; n < ou.size(); ++n) {
      ou[n] += (zem / c.eps0) * rho[n] * ge[n];
      oe[n] += -(zem / c.eps0) * rho[n] * gui[n];
    }
    const int j = (i + 1) % 3, k = (i + 2) % 3;
    CSp guj = gu.comp(j), guk = gu.comp(k);
    CSp Bj = B.comp(j), Bk = B.comp(k);
    for (std::size_t n = 0; n < ou.size(); ++n)
      ou[n] += zem * rho[n] * (guj[n] * Bk[n] - guk[n] * Bj[n]);
  }
}

// ---- schema builders ----

SchemaEntry vec(const std::string& n, int parity) {
  return {n, FieldKind::vector, parity};
}
SchemaEntry sc(const std::string& n, int parity) {
  return {n, FieldKind::scalar, parity};
}
SchemaEntry ph(const std::string& n) { return {n, FieldKind::phase, 0}; }

// ---- constraints ----

Constraint div_constraint(const std::string& field, const std::string& name) {
  return {name, [field](const Constants&, const State& x) {
            return divergence(*x.grid(), x.field(field));
          }};
}

/// div E - (e/eps0) sum_alpha (z_a/m_a^w) * source_a, where source is either
/// rho (weight 1/m) or int f dp (weight 1).
Constraint gauss_fluid(std::vector<std::string> rhos) {
  return {"gauss_E", [rhos](const Constants& c, const State& x) {
            auto out = divergence(*x.grid(), x.field("E"));
            for (std::size_t a = 0; a < rhos.size(); ++a) {
              const double coef = c.z[a] * c.e / (c.m[a] * c.eps0);
              acc(out, -coef, x.field(rhos[a]).data());
            }
            return out;
          }};
}

Constraint gauss_kinetic(std::vector<std::string> fs) {
  return {"gauss_E", [fs](const Constants& c, const State& x) {
            auto out = divergence(*x.grid(), x.field("E"));
            std::vector<double> n(x.grid()->size());
            for (std::size_t a = 0; a < fs.size(); ++a) {
              x.phase_grid()->momentum_integral(x.field(fs[a]).data(), n);
              acc(out, -c.z[a] * c.e / c.eps0, n);
            }
            return out;
          }};
}

void require_species(const Constants& c, std::size_t n,
                     const std::string& who) {
  if (c.z.size() < n || c.m.size() < n)
    throw ValidationError(who + ": needs " + std::to_string(n) +
                          " species in Constants");
}

// ---- catalog apply functions ----

Bracket make_em(GridPtr grid) {
  StateSchema schema({vec("E", 1), vec("B", -1)});
  auto apply = [](const Constants& c, const State& x, const State& dH,
                  State& out) {
    em_block(c, *x.grid(), dH.field("E"), dH.field("B"), out.field("E"),
             out.field("B"));
  };
  return Bracket("em", std::move(schema), std::move(grid), nullptr, apply,
                 {div_constraint("E", "div_E"), div_constraint("B", "div_B")});
}

Bracket make_em_canonical(GridPtr grid) {
  StateSchema schema({vec("A", 0), vec("Y", 0)});
  auto apply = [](const Constants& c, const State&, const State& dH,
                  State& out) {
    out.field("A").axpy(1.0 / c.eps0, dH.field("Y"));
    out.field("Y").axpy(-1.0 / c.eps0, dH.field("A"));
  };
  return Bracket("em_canonical", std::move(schema), std::move(grid), nullptr,
                 apply);
}

Bracket make_vlasov(GridPtr grid, PhaseGridPtr phase) {
  if (!phase) throw SchemaError("vlasov: phase grid required");
  StateSchema schema({ph("f")});
  auto apply = [](const Constants&, const State& x, const State& dH,
                  State& out) {
    vlasov_block(*x.phase_grid(), x.field("f").data(), dH.field("f").data(),
                 out.field("f").data());
  };
  return Bracket("vlasov", std::move(schema), std::move(grid),
                 std::move(phase), apply);
}

/// Momentum + advected densities; the shared core of the fluid catalog.
void hydro_core(const Grid3& g, const std::string& mom,
                const std::vector<std::string>& densities, const State& x,
                const State& dH, State& out) {
  momentum_self(g, x.field(mom), dH.field(mom), out.field(mom));
  for (const auto& d : densities)
    advect_density(g, x.field(d).data(), dH.field(mom), dH.field(d).data(),
                   out.field(d).data(), out.field(mom));
}

Bracket make_hydro(GridPtr grid) {
  StateSchema schema({vec("u", -1), sc("rho", 1), sc("s", 1)});
  auto apply = [](const Constants&, const State& x, const State& dH,
                  State& out) {
    hydro_core(*x.grid(), "u", {"rho", "s"}, x, dH, out);
  };
  return Bracket("hydro", std::move(schema), std::move(grid), nullptr, apply,
                 {}, {"rho"});
}

Bracket make_classical_binary(GridPtr grid) {
  StateSchema schema(
      {vec("u", -1), sc("rho1", 1), sc("rho2", 1), sc("s", 1)});
  auto apply = [](const Constants&, const State& x, const State& dH,
                  State& out) {
    hydro_core(*x.grid(), "u", {"rho1", "rho2", "s"}, x, dH, out);
  };
  return Bracket("classical_binary", std::move(schema), std::move(grid),
                 nullptr, apply, {}, {"rho1", "rho2"});
}

Bracket make_mhd(GridPtr grid) {
  StateSchema schema({vec("M", -1), sc("rho", 1), sc("s", 1), vec("B", -1)});
  auto apply = [](const Constants&, const State& x, const State& dH,
                  State& out) {
    hydro_core(*x.grid(), "M", {"rho", "s"}, x, dH, out);
    magnetic_block(*x.grid(), x.field("B"), dH.field("M"), dH.field("B"),
                   out.field("M"), out.field("B"));
  };
  return Bracket("mhd", std::move(schema), std::move(grid), nullptr, apply,
                 {div_constraint("B", "div_B")}, {"rho"});
}

Bracket make_ehd(GridPtr grid) {
  StateSchema schema({vec("M", -1), sc("rho", 1), sc("s", 1), vec("E", 1)});
  auto apply = [](const Constants& c, const State& x, const State& dH,
                  State& out) {
    require_species(c, 1, "ehd");
    hydro_core(*x.grid(), "M", {"rho", "s"}, x, dH, out);
    oneform_block(*x.grid(), x.field("E"), dH.field("M"), dH.field("E"),
                  out.field("M"), out.field("E"));
    const double zem = c.z[0] * c.e / (c.m[0] * c.eps0);
    CSp rho = x.field("rho").data();
    for (int i = 0; i < 3; ++i) {
      Sp oM = out.field("M").comp(i);
      Sp oE = out.field("E").comp(i);
      CSp gE = dH.field("E").comp(i);
      CSp gM = dH.field("M").comp(i);
      for (std::size_t n = 0; n < oM.size(); ++n) {
        oM[n] += zem * rho[n] * gE[n];
        oE[n] += -zem * rho[n] * gM[n];
      }
    }
  };
  return Bracket("ehd", std::move(schema), std::move(grid), nullptr, apply,
                 {gauss_fluid({"rho"})}, {"rho"});
}

Bracket make_emhd(GridPtr grid) {
  StateSchema schema(
      {vec("u", -1), sc("rho", 1), sc("s", 1), vec("E", 1), vec("B", -1)});
  auto apply = [](const Constants& c, const State& x, const State& dH,
                  State& out) {
    require_species(c, 1, "emhd");
    hydro_core(*x.grid(), "u", {"rho", "s"}, x, dH, out);
    em_block(c, *x.grid(), dH.field("E"), dH.field("B"), out.field("E"),
             out.field("B"));
    fluid_charge_coupling(c, 0, *x.grid(), x.field("rho").data(),
                          x.field("B"), dH.field("u"), dH.field("E"),
                          out.field("u"), out.field("E"));
  };
  return Bracket("emhd", std::move(schema), std::move(grid), nullptr, apply,
                 {gauss_fluid({"rho"}), div_constraint("B", "div_B")},
                 {"rho"});
}

Bracket make_emhd_total(GridPtr grid) {
  StateSchema schema(
      {vec("M", -1), sc("rho", 1), sc("s", 1), vec("E", 1), vec("B", -1)});
  auto velocity = std::make_shared<Bracket>(make_emhd(grid));
  // Exact pushforward of the velocity-form bivector under
  // M = u + eps0 (E x B): pull the cotangent back by the chain rule, apply,
  // push the tangent forward. Coefficients of the displayed total-momentum
  // bracket are thereby fixed by construction.
  auto apply = [velocity](const Constants& c, const State& x, const State& dH,
                          State& out) {
    State xv = velocity->make_state();
    State gv = velocity->make_state();
    xv.field("rho") = x.field("rho");
    xv.field("s") = x.field("s");
    xv.field("E") = x.field("E");
    xv.field("B") = x.field("B");
    xv.field("u") = x.field("M");
    acc_cross(x.field("E"), x.field("B"), -c.eps0, xv.field("u"));

    gv.field("rho") = dH.field("rho");
    gv.field("s") = dH.field("s");
    gv.field("u") = dH.field("M");
    gv.field("E") = dH.field("E");
    acc_cross(x.field("B"), dH.field("M"), c.eps0, gv.field("E"));
    gv.field("B") = dH.field("B");
    acc_cross(dH.field("M"), x.field("E"), c.eps0, gv.field("B"));

    State v = velocity->apply(c, xv, gv);

    out.field("rho") = v.field("rho");
    out.field("s") = v.field("s");
    out.field("E") = v.field("E");
    out.field("B") = v.field("B");
    out.field("M") = v.field("u");
    acc_cross(v.field("E"), x.field("B"), c.eps0, out.field("M"));
    acc_cross(x.field("E"), v.field("B"), c.eps0, out.field("M"));
  };
  return Bracket("emhd_total", std::move(schema), grid, nullptr, apply,
                 {gauss_fluid({"rho"}), div_constraint("B", "div_B")},
                 {"rho"});
}

Bracket make_ked(GridPtr grid, PhaseGridPtr phase) {
  if (!phase) throw SchemaError("ked: phase grid required");
  StateSchema schema({ph("f"), vec("E", 1), vec("B", -1)});
  auto apply = [](const Constants& c, const State& x, const State& dH,
                  State& out) {
    require_species(c, 1, "ked");
    vlasov_block(*x.phase_grid(), x.field("f").data(), dH.field("f").data(),
                 out.field("f").data());
    em_block(c, *x.grid(), dH.field("E"), dH.field("B"), out.field("E"),
             out.field("B"));
    ked_coupling(c, 0, *x.phase_grid(), x.field("f").data(),
                 dH.field("f").data(), x.field("B"), dH.field("E"),
                 out.field("f").data(), out.field("E"));
  };
  return Bracket("ked", std::move(schema), std::move(grid), std::move(phase),
                 apply,
                 {gauss_kinetic({"f"}), div_constraint("B", "div_B")});
}

Bracket make_ked_binary(GridPtr grid, PhaseGridPtr phase) {
  if (!phase) throw SchemaError("ked_binary: phase grid required");
  StateSchema schema({ph("f1"), ph("f2"), vec("E", 1), vec("B", -1)});
  auto apply = [](const Constants& c, const State& x, const State& dH,
                  State& out) {
    require_species(c, 2, "ked_binary");
    em_block(c, *x.grid(), dH.field("E"), dH.field("B"), out.field("E"),
             out.field("B"));
    const std::array<std::string, 2> fs{"f1", "f2"};
    for (int a = 0; a < 2; ++a) {
      vlasov_block(*x.phase_grid(), x.field(fs[a]).data(),
                   dH.field(fs[a]).data(), out.field(fs[a]).data());
      ked_coupling(c, a, *x.phase_grid(), x.field(fs[a]).data(),
                   dH.field(fs[a]).data(), x.field("B"), dH.field("E"),
                   out.field(fs[a]).data(), out.field("E"));
    }
  };
  return Bracket("ked_binary", std::move(schema), std::move(grid),
                 std::move(phase), apply,
                 {gauss_kinetic({"f1", "f2"}), div_constraint("B", "div_B")});
}

Bracket make_bemhd(GridPtr grid) {
  StateSchema schema({vec("u1", -1), sc("rho1", 1), sc("s1", 1), vec("u2", -1),
                      sc("rho2", 1), sc("s2", 1), vec("E", 1), vec("B", -1)});
  auto apply = [](const Constants& c, const State& x, const State& dH,
                  State& out) {
    require_species(c, 2, "bemhd");
    em_block(c, *x.grid(), dH.field("E"), dH.field("B"), out.field("E"),
             out.field("B"));
    const std::array<std::string, 2> us{"u1", "u2"};
    const std::array<std::string, 2> rs{"rho1", "rho2"};
    const std::array<std::string, 2> ss{"s1", "s2"};
    for (int a = 0; a < 2; ++a) {
      hydro_core(*x.grid(), us[a], {rs[a], ss[a]}, x, dH, out);
      fluid_charge_coupling(c, a, *x.grid(), x.field(rs[a]).data(),
                            x.field("B"), dH.field(us[a]), dH.field("E"),
                            out.field(us[a]), out.field("E"));
    }
  };
  return Bracket("bemhd", std::move(schema), std::move(grid), nullptr, apply,
                 {gauss_fluid({"rho1", "rho2"}), div_constraint("B", "div_B")},
                 {"rho1", "rho2"});
}

Bracket make_cbemhd(GridPtr grid) {
  StateSchema schema({vec("u", -1), sc("rho1", 1), sc("rho2", 1), sc("s", 1),
                      vec("E", 1), vec("B", -1)});
  auto apply = [](const Constants& c, const State& x, const State& dH,
                  State& out) {
    require_species(c, 2, "cbemhd");
    hydro_core(*x.grid(), "u", {"rho1", "rho2", "s"}, x, dH, out);
    em_block(c, *x.grid(), dH.field("E"), dH.field("B"), out.field("E"),
             out.field("B"));
    const std::array<std::string, 2> rs{"rho1", "rho2"};
    for (int a = 0; a < 2; ++a)
      fluid_charge_coupling(c, a, *x.grid(), x.field(rs[a]).data(),
                            x.field("B"), dH.field("u"), dH.field("E"),
                            out.field("u"), out.field("E"));
  };
  return Bracket("cbemhd", std::move(schema), std::move(grid), nullptr, apply,
                 {gauss_fluid({"rho1", "rho2"}), div_constraint("B", "div_B")},
                 {"rho1", "rho2"});
}

}  // namespace

Bracket::Bracket(std::string name, StateSchema schema, GridPtr grid,
                 PhaseGridPtr phase, ApplyFn apply,
                 std::vector<Constraint> constraints,
                 std::vector<std::string> positive_fields)
    : name_(std::move(name)), schema_(std::move(schema)),
      grid_(std::move(grid)), phase_(std::move(phase)),
      apply_(std::move(apply)), constraints_(std::move(constraints)),
      positive_fields_(std::move(positive_fields)) {
  if (!grid_) throw SchemaError("Bracket: grid required");
  if (schema_.has_phase() && !phase_)
    throw SchemaError("Bracket '" + name_ + "': phase grid required");
}

State Bracket::make_state() const { return State(schema_, grid_, phase_); }

void Bracket::apply_into(const Constants& c, const State& x, const State& dH,
                         State& out) const {
  const State proto = make_state();
  proto.require_compatible(x);
  proto.require_compatible(dH);
  proto.require_compatible(out);
  for (const auto& name : positive_fields_) {
    const auto d = x.field(name).data();
    for (double v : d)
      if (!(v > 0.0))
        throw ValidationError("bracket " + name_ + ": field '" + name +
                              "' must be positive everywhere");
  }
  out.fill(0.0);
  apply_(c, x, dH, out);
}

State Bracket::apply(const Constants& c, const State& x,
                     const State& dH) const {
  State out = make_state();
  apply_into(c, x, dH, out);
  return out;
}

double Bracket::value(const Constants& c, const State& x, const State& dF,
                      const State& dH) const {
  return dot(dF, apply(c, x, dH));
}

std::vector<std::string> bracket_names() {
  return {"em_canonical", "em",   "vlasov",     "hydro", "hydro_binary",
          "classical_binary", "ked", "ked_binary", "emhd", "emhd_total",
          "bemhd", "cbemhd", "mhd", "ehd"};
}

Bracket direct_product(const Bracket& a, const Bracket& b) {
  if (!(*a.grid() == *b.grid()))
    throw SchemaError("direct_product: grids differ");
  if (a.phase_grid() && b.phase_grid() &&
      !(*a.phase_grid() == *b.phase_grid()))
    throw SchemaError("direct_product: phase grids differ");
  std::vector<SchemaEntry> entries = a.schema().entries();
  for (const auto& e : b.schema().entries()) {
    if (a.schema().index_of(e.name) >= 0)
      throw SchemaError("direct_product: variable name collision: " + e.name);
    entries.push_back(e);
  }
  auto pa = std::make_shared<Bracket>(a);
  auto pb = std::make_shared<Bracket>(b);
  auto apply = [pa, pb](const Constants& c, const State& x, const State& dH,
                        State& out) {
    for (const auto* part : {pa.get(), pb.get()}) {
      State xs = part->make_state();
      State gs = part->make_state();
      for (const auto& e : part->schema().entries()) {
        xs.field(e.name) = x.field(e.name);
        gs.field(e.name) = dH.field(e.name);
      }
      State v = part->apply(c, xs, gs);
      for (const auto& e : part->schema().entries())
        out.field(e.name).axpy(1.0, v.field(e.name));
    }
  };
  std::vector<Constraint> constraints = a.constraints();
  for (const auto& cn : b.constraints()) constraints.push_back(cn);
  std::vector<std::string> positive = a.positive_fields();
  for (const auto& p : b.positive_fields()) positive.push_back(p);
  PhaseGridPtr phase = a.phase_grid() ? a.phase_grid() : b.phase_grid();
  return Bracket(a.name() + "*" + b.name(), StateSchema(std::move(entries)),
                 a.grid(), phase, apply, std::move(constraints),
                 std::move(positive));
}

Bracket renamed(const Bracket& b,
                const std::map<std::string, std::string>& mapping,
                const std::string& new_name) {
  std::vector<SchemaEntry> entries = b.schema().entries();
  std::map<std::string, std::string> new_to_old;
  for (auto& e : entries) {
    auto it = mapping.find(e.name);
    const std::string nn = it == mapping.end() ? e.name : it->second;
    if (!new_to_old.emplace(nn, e.name).second)
      throw SchemaError("renamed: duplicate target name " + nn);
    e.name = nn;
  }
  auto pb_ = std::make_shared<Bracket>(b);
  auto apply = [pb_, new_to_old](const Constants& c, const State& x,
                                 const State& dH, State& out) {
    State xs = pb_->make_state();
    State gs = pb_->make_state();
    for (const auto& [nn, on] : new_to_old) {
      xs.field(on) = x.field(nn);
      gs.field(on) = dH.field(nn);
    }
    State v = pb_->apply(c, xs, gs);
    for (const auto& [nn, on] : new_to_old)
      out.field(nn).axpy(1.0, v.field(on));
  };
  std::vector<Constraint> constraints;  // constraints reference old names
  std::vector<std::string> positive;
  for (const auto& p : b.positive_fields()) {
    auto it = mapping.find(p);
    positive.push_back(it == mapping.end() ? p : it->second);
  }
  return Bracket(new_name, StateSchema(std::move(entries)), b.grid(),
                 b.phase_grid(), apply, std::move(constraints),
                 std::move(positive));
}

Bracket momentum_bracket(GridPtr grid, const std::string& var, int parity) {
  StateSchema schema({vec(var, parity)});
  auto apply = [var](const Constants&, const State& x, const State& dH,
                     State& out) {
    momentum_self(*x.grid(), x.field(var), dH.field(var), out.field(var));
  };
  return Bracket("momentum(" + var + ")", std::move(schema), std::move(grid),
                 nullptr, apply);
}

Bracket semidirect_vector(const Bracket& base, const std::string& momentum,
                          const std::vector<Attachment>& attachments,
                          const std::string& new_name) {
  if (base.schema().index_of(momentum) < 0 ||
      base.schema().at(momentum).kind != FieldKind::vector)
    throw SchemaError("semidirect_vector: base bracket has no vector '" +
                      momentum + "'");
  std::vector<SchemaEntry> entries = base.schema().entries();
  for (const auto& at : attachments) {
    auto add = [&](const std::string& n, FieldKind k) {
      for (const auto& e : entries)
        if (e.name == n)
          throw SchemaError("semidirect_vector: name collision: " + n);
      entries.push_back({n, k, at.parity});
    };
    switch (at.kind) {
      case Attachment::Kind::advected_density:
        add(at.name, FieldKind::scalar);
        break;
      case Attachment::Kind::cotangent_pair:
        add(at.name, FieldKind::vector);
        add(at.dual, FieldKind::vector);
        break;
    }
  }
  auto pbase = std::make_shared<Bracket>(base);
  auto atts = attachments;
  auto apply = [pbase, atts, momentum](const Constants& c, const State& x,
                                       const State& dH, State& out) {
    // Base block.
    State xs = pbase->make_state();
    State gs = pbase->make_state();
    for (const auto& e : pbase->schema().entries()) {
      xs.field(e.name) = x.field(e.name);
      gs.field(e.name) = dH.field(e.name);
    }
    State v = pbase->apply(c, xs, gs);
    for (const auto& e : pbase->schema().entries())
      out.field(e.name).axpy(1.0, v.field(e.name));

    const Grid3& g = *x.grid();
    const Field& X = dH.field(momentum);  // advecting direction dH_m
    Field& outm = out.field(momentum);
    for (const auto& at : atts) {
      if (at.kind == Attachment::Kind::advected_density) {
        advect_density(g, x.field(at.name).data(), X,
                       dH.field(at.name).data(), out.field(at.name).data(),
                       outm);
        continue;
      }
      // Cotangent pair (A, Y): one-form A dragged by minus the Lie
      // derivative, Y by the dual (vector-density) action, the momentum
      // picking up the corresponding force terms; plus the canonical block
      // scaled by 1/kappa.
      const Field& A = x.field(at.name);
      const Field& Y = x.field(at.dual);
      const Field& gA = dH.field(at.name);
      const Field& gY = dH.field(at.dual);
      Field& outA = out.field(at.name);
      Field& outY = out.field(at.dual);
      outA.axpy(1.0 / at.kappa, gY);
      outY.axpy(-1.0 / at.kappa, gA);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          // Adot_i += -X_j d_j A_i - A_j d_i X_j
          acc_mul_deriv(g, X.comp(j), A.comp(i), j, -1.0, outA.comp(i));
          acc_mul_deriv(g, A.comp(j), X.comp(j), i, -1.0, outA.comp(i));
          // Ydot_i += -d_j(Y_i X_j) + Y_j d_j X_i
          acc_deriv_product(g, Y.comp(i), X.comp(j), j, -1.0, outY.comp(i));
          acc_mul_deriv(g, Y.comp(j), X.comp(i), j, 1.0, outY.comp(i));
          // mdot_i += gA_j d_i A_j - d_j(A_i gA_j)
          //           - Y_j d_i gY_j + d_j(Y_j gY_i)
          acc_mul_deriv(g, gA.comp(j), A.comp(j), i, 1.0, outm.comp(i));
          acc_deriv_product(g, A.comp(i), gA.comp(j), j, -1.0, outm.comp(i));
          acc_mul_deriv(g, Y.comp(j), gY.comp(j), i, -1.0, outm.comp(i));
          acc_deriv_product(g, Y.comp(j), gY.comp(i), j, 1.0, outm.comp(i));
        }
    }
  };
  std::vector<std::string> positive = base.positive_fields();
  return Bracket(new_name, StateSchema(std::move(entries)), base.grid(),
                 base.phase_grid(), apply, {}, std::move(positive));
}

Bracket make_bracket(const std::string& name, GridPtr grid,
                     PhaseGridPtr phase) {
  if (name == "em") return make_em(std::move(grid));
  if (name == "em_canonical") return make_em_canonical(std::move(grid));
  if (name == "vlasov") return make_vlasov(std::move(grid), std::move(phase));
  if (name == "hydro") return make_hydro(std::move(grid));
  if (name == "hydro_binary") {
    Bracket h = make_hydro(grid);
    Bracket h1 =
        renamed(h, {{"u", "u1"}, {"rho", "rho1"}, {"s", "s1"}}, "hydro1");
    Bracket h2 =
        renamed(h, {{"u", "u2"}, {"rho", "rho2"}, {"s", "s2"}}, "hydro2");
    Bracket prod = direct_product(h1, h2);
    return Bracket("hydro_binary", prod.schema(), prod.grid(), nullptr,
                   [prod](const Constants& c, const State& x, const State& dH,
                          State& out) { prod.apply_into(c, x, dH, out); },
                   {}, prod.positive_fields());
  }
  if (name == "classical_binary") return make_classical_binary(std::move(grid));
  if (name == "ked") return make_ked(std::move(grid), std::move(phase));
  if (name == "ked_binary")
    return make_ked_binary(std::move(grid), std::move(phase));
  if (name == "emhd") return make_emhd(std::move(grid));
  if (name == "emhd_total") return make_emhd_total(std::move(grid));
  if (name == "bemhd") return make_bemhd(std::move(grid));
  if (name == "cbemhd") return make_cbemhd(std::move(grid));
  if (name == "mhd") return make_mhd(std::move(grid));
  if (name == "ehd") return make_ehd(std::move(grid));
  throw SchemaError("unknown bracket name: " + name);
}

}  // namespace pb
