#include "pb/hamiltonians.hpp"

#include <cmath>
#include <numbers>

namespace pb {

namespace {

using CSp = std::span<const double>;
using Sp = std::span<double>;

void curl_into(const Grid3& g, const Field& v, Field& out, double coef) {
  std::vector<double> d(g.size());
  auto addd = [&](int comp, int dcomp, int axis, double sgn) {
    g.derivative(v.comp(dcomp), d, axis);
    Sp o = out.comp(comp);
    for (std::size_t i = 0; i < o.size(); ++i) o[i] += coef * sgn * d[i];
  };
  addd(0, 2, 1, 1.0);
  addd(0, 1, 2, -1.0);
  addd(1, 0, 2, 1.0);
  addd(1, 2, 0, -1.0);
  addd(2, 1, 0, 1.0);
  addd(2, 0, 1, -1.0);
}

double quad_sum(const Field& f, const std::vector<double>& density) {
  double s = 0.0;
  for (double v : density) s += v;
  return s * f.quad_weight();
}

// --- electromagnetic energy (eps0/2) int (E^2 + c^2 B^2) ---

double em_energy(const Constants& c, const State& x, const std::string& En,
                 const std::string& Bn) {
  const Field& E = x.field(En);
  const Field& B = x.field(Bn);
  double s = 0.0;
  for (int a = 0; a < 3; ++a) {
    CSp e = E.comp(a), b = B.comp(a);
    for (std::size_t i = 0; i < e.size(); ++i)
      s += e[i] * e[i] + c.c2() * b[i] * b[i];
  }
  return 0.5 * c.eps0 * s * E.quad_weight();
}

void em_deriv(const Constants& c, const State& x, State& g,
              const std::string& En, const std::string& Bn) {
  g.field(En).axpy(c.eps0, x.field(En));
  g.field(Bn).axpy(1.0 / c.mu0, x.field(Bn));
}

// --- barotropic-with-entropy fluid: int |m|^2/(2 rho) + eps(rho, s) ---

void require_positive(CSp rho, const std::string& what) {
  for (double v : rho)
    if (!(v > 0.0))
      throw ValidationError("hamiltonian: " + what +
                            " must be positive everywhere");
}

double fluid_energy(const Eos& eos, const State& x, const std::string& mn,
                    const std::string& rn, const std::string& sn) {
  const Field& m = x.field(mn);
  CSp rho = x.field(rn).data(), s = x.field(sn).data();
  require_positive(rho, rn);
  std::vector<double> dens(rho.size(), 0.0);
  for (int a = 0; a < 3; ++a) {
    CSp mc = m.comp(a);
    for (std::size_t i = 0; i < dens.size(); ++i)
      dens[i] += mc[i] * mc[i];
  }
  for (std::size_t i = 0; i < dens.size(); ++i)
    dens[i] = dens[i] / (2.0 * rho[i]) + eos.eps(rho[i], s[i]);
  return quad_sum(x.field(rn), dens);
}

void fluid_deriv(const Eos& eos, const State& x, State& g,
                 const std::string& mn, const std::string& rn,
                 const std::string& sn) {
  const Field& m = x.field(mn);
  CSp rho = x.field(rn).data(), s = x.field(sn).data();
  require_positive(rho, rn);
  Field& gm = g.field(mn);
  Sp gr = g.field(rn).data(), gs = g.field(sn).data();
  std::vector<double> m2(rho.size(), 0.0);
  for (int a = 0; a < 3; ++a) {
    CSp mc = m.comp(a);
    Sp gc = gm.comp(a);
    for (std::size_t i = 0; i < rho.size(); ++i) {
      gc[i] += mc[i] / rho[i];
      m2[i] += mc[i] * mc[i];
    }
  }
  for (std::size_t i = 0; i < rho.size(); ++i) {
    gr[i] += -m2[i] / (2.0 * rho[i] * rho[i]) + eos.eps_rho(rho[i], s[i]);
    gs[i] += eos.eps_s(rho[i], s[i]);
  }
}

// --- kinetic: int f h(p), h the periodized single-particle energy ---

std::vector<double> kinetic_h(const PhaseGrid& g, double mass) {
  std::vector<double> h(g.size());
  const auto& pd = g.pdims();
  std::vector<double> hmom(g.momentum_size(), 0.0);
  for (int q0 = 0; q0 < pd[0]; ++q0)
    for (int q1 = 0; q1 < pd[1]; ++q1)
      for (int q2 = 0; q2 < pd[2]; ++q2) {
        const std::array<int, 3> qi{q0, q1, q2};
        double v = 0.0;
        for (int a = 0; a < 3; ++a)
          if (pd[a] > 1)
            v += periodized_kinetic(g, a, g.pcoord(a, qi[a]), mass);
        hmom[(static_cast<std::size_t>(q0) * pd[1] + q1) * pd[2] + q2] = v;
      }
  for (std::size_t r = 0; r < g.spatial().size(); ++r)
    for (std::size_t q = 0; q < hmom.size(); ++q)
      h[g.index(r, q)] = hmom[q];
  return h;
}

double interaction_energy(double alpha, const State& x, const std::string& r1,
                          const std::string& r2) {
  if (alpha == 0.0) return 0.0;
  CSp a = x.field(r1).data(), b = x.field(r2).data();
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return alpha * s * x.field(r1).quad_weight();
}

void interaction_deriv(double alpha, const State& x, State& g,
                       const std::string& r1, const std::string& r2) {
  if (alpha == 0.0) return;
  g.field(r1).axpy(alpha, x.field(r2));
  g.field(r2).axpy(alpha, x.field(r1));
}

// emhd_total kinetic term works with u = M - eps0 E x B.
std::vector<std::vector<double>> drift_velocity(const Constants& c,
                                                const State& x) {
  const Field& M = x.field("M");
  const Field& E = x.field("E");
  const Field& B = x.field("B");
  std::vector<std::vector<double>> u(3);
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3, k = (i + 2) % 3;
    CSp m = M.comp(i), Ej = E.comp(j), Ek = E.comp(k), Bj = B.comp(j),
        Bk = B.comp(k);
    u[i].resize(m.size());
    for (std::size_t n = 0; n < m.size(); ++n)
      u[i][n] = m[n] - c.eps0 * (Ej[n] * Bk[n] - Ek[n] * Bj[n]);
  }
  return u;
}

}  // namespace

Eos eos_ideal(double K, double gamma, double c_v) {
  auto guard = [](double rho) {
    if (!(rho > 0.0)) throw ValidationError("eos_ideal: rho must be > 0");
  };
  Eos e;
  e.eps = [=](double rho, double s) {
    guard(rho);
    return K * std::pow(rho, gamma) * std::exp(s / (c_v * rho));
  };
  e.eps_rho = [=](double rho, double s) {
    guard(rho);
    const double eps = K * std::pow(rho, gamma) * std::exp(s / (c_v * rho));
    return eps * (gamma / rho - s / (c_v * rho * rho));
  };
  e.eps_s = [=](double rho, double s) {
    guard(rho);
    const double eps = K * std::pow(rho, gamma) * std::exp(s / (c_v * rho));
    return eps / (c_v * rho);
  };
  return e;
}

double periodized_kinetic(const PhaseGrid& g, int mom_axis, double p,
                          double mass) {
  const double pmax = g.pmax()[mom_axis];
  const double a = pmax / std::numbers::pi;
  return (a * a / mass) * (1.0 - std::cos(p / a));
}

Functional make_hamiltonian(const std::string& bracket_name,
                            const Constants& c, const State& prototype,
                            const Eos& eos, double interaction_alpha) {
  c.validate();
  const StateSchema schema = prototype.schema();
  auto zero_like = [schema, g = prototype.grid(),
                    p = prototype.phase_grid()]() {
    return State(schema, g, p);
  };

  if (bracket_name == "em") {
    return {"em_energy",
            [c](const State& x) { return em_energy(c, x, "E", "B"); },
            [c, zero_like](const State& x) {
              State g = zero_like();
              em_deriv(c, x, g, "E", "B");
              return g;
            }};
  }
  if (bracket_name == "em_canonical") {
    // E = -Y, B = curl A: H = (eps0/2) int (Y^2 + c^2 |curl A|^2).
    return {"em_canonical_energy",
            [c](const State& x) {
              const Grid3& g = *x.grid();
              Field curlA(FieldKind::vector, x.grid());
              curl_into(g, x.field("A"), curlA, 1.0);
              double s = 0.0;
              for (int a = 0; a < 3; ++a) {
                CSp y = x.field("Y").comp(a), b = curlA.comp(a);
                for (std::size_t i = 0; i < y.size(); ++i)
                  s += y[i] * y[i] + c.c2() * b[i] * b[i];
              }
              return 0.5 * c.eps0 * s * g.quad_weight();
            },
            [c, zero_like](const State& x) {
              State g = zero_like();
              g.field("Y").axpy(c.eps0, x.field("Y"));
              Field curlA(FieldKind::vector, x.grid());
              curl_into(*x.grid(), x.field("A"), curlA, 1.0);
              curl_into(*x.grid(), curlA, g.field("A"), 1.0 / c.mu0);
              return g;
            }};
  }
  if (bracket_name == "hydro") {
    return {"hydro_energy",
            [eos](const State& x) {
              return fluid_energy(eos, x, "u", "rho", "s");
            },
            [eos, zero_like](const State& x) {
              State g = zero_like();
              fluid_deriv(eos, x, g, "u", "rho", "s");
              return g;
            }};
  }
  if (bracket_name == "classical_binary" || bracket_name == "cbemhd") {
    // One-momentum, one-temperature mixture: kinetic + internal energy of
    // the total density.
    const bool em_part = bracket_name == "cbemhd";
    auto total = [](const State& x) {
      CSp r1 = x.field("rho1").data(), r2 = x.field("rho2").data();
      std::vector<double> rt(r1.size());
      for (std::size_t i = 0; i < rt.size(); ++i) rt[i] = r1[i] + r2[i];
      return rt;
    };
    return {bracket_name + "_energy",
            [eos, em_part, total, c](const State& x) {
              auto rt = total(x);
              require_positive(rt, "rho1+rho2");
              CSp s = x.field("s").data();
              const Field& u = x.field("u");
              std::vector<double> dens(rt.size(), 0.0);
              for (int a = 0; a < 3; ++a) {
                CSp uc = u.comp(a);
                for (std::size_t i = 0; i < rt.size(); ++i)
                  dens[i] += uc[i] * uc[i];
              }
              for (std::size_t i = 0; i < rt.size(); ++i)
                dens[i] = dens[i] / (2.0 * rt[i]) + eos.eps(rt[i], s[i]);
              double h = quad_sum(x.field("rho1"), dens);
              if (em_part) h += em_energy(c, x, "E", "B");
              return h;
            },
            [eos, em_part, total, c, zero_like](const State& x) {
              State g = zero_like();
              auto rt = total(x);
              require_positive(rt, "rho1+rho2");
              CSp s = x.field("s").data();
              const Field& u = x.field("u");
              Field& gu = g.field("u");
              std::vector<double> u2(rt.size(), 0.0);
              for (int a = 0; a < 3; ++a) {
                CSp uc = u.comp(a);
                Sp gc = gu.comp(a);
                for (std::size_t i = 0; i < rt.size(); ++i) {
                  gc[i] += uc[i] / rt[i];
                  u2[i] += uc[i] * uc[i];
                }
              }
              Sp g1 = g.field("rho1").data(), g2 = g.field("rho2").data(),
                 gs = g.field("s").data();
              for (std::size_t i = 0; i < rt.size(); ++i) {
                const double dr =
                    -u2[i] / (2.0 * rt[i] * rt[i]) + eos.eps_rho(rt[i], s[i]);
                g1[i] += dr;
                g2[i] += dr;
                gs[i] += eos.eps_s(rt[i], s[i]);
              }
              if (em_part) em_deriv(c, x, g, "E", "B");
              return g;
            }};
  }
  if (bracket_name == "hydro_binary" || bracket_name == "bemhd") {
    const bool em_part = bracket_name == "bemhd";
    const double alpha = interaction_alpha;
    return {bracket_name + "_energy",
            [eos, em_part, alpha, c](const State& x) {
              double h = fluid_energy(eos, x, "u1", "rho1", "s1") +
                         fluid_energy(eos, x, "u2", "rho2", "s2") +
                         interaction_energy(alpha, x, "rho1", "rho2");
              if (em_part) h += em_energy(c, x, "E", "B");
              return h;
            },
            [eos, em_part, alpha, c, zero_like](const State& x) {
              State g = zero_like();
              fluid_deriv(eos, x, g, "u1", "rho1", "s1");
              fluid_deriv(eos, x, g, "u2", "rho2", "s2");
              interaction_deriv(alpha, x, g, "rho1", "rho2");
              if (em_part) em_deriv(c, x, g, "E", "B");
              return g;
            }};
  }
  if (bracket_name == "mhd") {
    return {"mhd_energy",
            [eos, c](const State& x) {
              double h = fluid_energy(eos, x, "M", "rho", "s");
              CSp b0 = x.field("B").comp(0);
              for (int a = 0; a < 3; ++a) {
                CSp b = x.field("B").comp(a);
                for (std::size_t i = 0; i < b0.size(); ++i)
                  h += b[i] * b[i] / (2.0 * c.mu0) * x.grid()->quad_weight();
              }
              return h;
            },
            [eos, c, zero_like](const State& x) {
              State g = zero_like();
              fluid_deriv(eos, x, g, "M", "rho", "s");
              g.field("B").axpy(1.0 / c.mu0, x.field("B"));
              return g;
            }};
  }
  if (bracket_name == "ehd") {
    return {"ehd_energy",
            [eos, c](const State& x) {
              double h = fluid_energy(eos, x, "M", "rho", "s");
              for (int a = 0; a < 3; ++a) {
                CSp e = x.field("E").comp(a);
                for (std::size_t i = 0; i < e.size(); ++i)
                  h += 0.5 * c.eps0 * e[i] * e[i] * x.grid()->quad_weight();
              }
              return h;
            },
            [eos, c, zero_like](const State& x) {
              State g = zero_like();
              fluid_deriv(eos, x, g, "M", "rho", "s");
              g.field("E").axpy(c.eps0, x.field("E"));
              return g;
            }};
  }
  if (bracket_name == "emhd") {
    return {"emhd_energy",
            [eos, c](const State& x) {
              return fluid_energy(eos, x, "u", "rho", "s") +
                     em_energy(c, x, "E", "B");
            },
            [eos, c, zero_like](const State& x) {
              State g = zero_like();
              fluid_deriv(eos, x, g, "u", "rho", "s");
              em_deriv(c, x, g, "E", "B");
              return g;
            }};
  }
  if (bracket_name == "emhd_total") {
    // Same physical energy as emhd expressed through M = u + eps0 E x B.
    return {"emhd_total_energy",
            [eos, c](const State& x) {
              auto u = drift_velocity(c, x);
              CSp rho = x.field("rho").data(), s = x.field("s").data();
              require_positive(rho, "rho");
              std::vector<double> dens(rho.size(), 0.0);
              for (int a = 0; a < 3; ++a)
                for (std::size_t i = 0; i < rho.size(); ++i)
                  dens[i] += u[a][i] * u[a][i];
              for (std::size_t i = 0; i < rho.size(); ++i)
                dens[i] = dens[i] / (2.0 * rho[i]) + eos.eps(rho[i], s[i]);
              return quad_sum(x.field("rho"), dens) +
                     em_energy(c, x, "E", "B");
            },
            [eos, c, zero_like](const State& x) {
              State g = zero_like();
              auto u = drift_velocity(c, x);
              CSp rho = x.field("rho").data(), s = x.field("s").data();
              require_positive(rho, "rho");
              const Field& E = x.field("E");
              const Field& B = x.field("B");
              Field& gM = g.field("M");
              Field& gE = g.field("E");
              Field& gB = g.field("B");
              std::vector<double> u2(rho.size(), 0.0);
              // v = u/rho enters dH_M; dH_E += -eps0 (B x v);
              // dH_B += -eps0 (v x E).
              std::vector<std::vector<double>> v(3);
              for (int a = 0; a < 3; ++a) {
                v[a].resize(rho.size());
                Sp gm = gM.comp(a);
                for (std::size_t i = 0; i < rho.size(); ++i) {
                  v[a][i] = u[a][i] / rho[i];
                  gm[i] += v[a][i];
                  u2[i] += u[a][i] * u[a][i];
                }
              }
              Sp gr = g.field("rho").data(), gs = g.field("s").data();
              for (std::size_t i = 0; i < rho.size(); ++i) {
                gr[i] +=
                    -u2[i] / (2.0 * rho[i] * rho[i]) + eos.eps_rho(rho[i], s[i]);
                gs[i] += eos.eps_s(rho[i], s[i]);
              }
              for (int i = 0; i < 3; ++i) {
                const int j = (i + 1) % 3, k = (i + 2) % 3;
                CSp Bj = B.comp(j), Bk = B.comp(k), Ej = E.comp(j),
                    Ek = E.comp(k);
                Sp ge = gE.comp(i), gb = gB.comp(i);
                for (std::size_t n = 0; n < rho.size(); ++n) {
                  ge[n] += -c.eps0 * (Bj[n] * v[k][n] - Bk[n] * v[j][n]);
                  gb[n] += -c.eps0 * (v[j][n] * Ek[n] - v[k][n] * Ej[n]);
                }
              }
              em_deriv(c, x, g, "E", "B");
              return g;
            }};
  }
  if (bracket_name == "vlasov" || bracket_name == "ked") {
    if (!prototype.phase_grid())
      throw SchemaError(bracket_name + " hamiltonian: phase grid required");
    auto h = std::make_shared<std::vector<double>>(
        kinetic_h(*prototype.phase_grid(), c.m[0]));
    const bool em_part = bracket_name == "ked";
    return {bracket_name + "_energy",
            [h, em_part, c](const State& x) {
              CSp f = x.field("f").data();
              double s = 0.0;
              for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * (*h)[i];
              s *= x.field("f").quad_weight();
              if (em_part) s += em_energy(c, x, "E", "B");
              return s;
            },
            [h, em_part, c, zero_like](const State& x) {
              State g = zero_like();
              Sp gf = g.field("f").data();
              for (std::size_t i = 0; i < gf.size(); ++i) gf[i] += (*h)[i];
              if (em_part) em_deriv(c, x, g, "E", "B");
              return g;
            }};
  }
  if (bracket_name == "ked_binary") {
    if (!prototype.phase_grid())
      throw SchemaError("ked_binary hamiltonian: phase grid required");
    if (c.m.size() < 2)
      throw ValidationError("ked_binary hamiltonian: needs 2 species");
    auto h1 = std::make_shared<std::vector<double>>(
        kinetic_h(*prototype.phase_grid(), c.m[0]));
    auto h2 = std::make_shared<std::vector<double>>(
        kinetic_h(*prototype.phase_grid(), c.m[1]));
    return {"ked_binary_energy",
            [h1, h2, c](const State& x) {
              CSp f1 = x.field("f1").data(), f2 = x.field("f2").data();
              double s = 0.0;
              for (std::size_t i = 0; i < f1.size(); ++i)
                s += f1[i] * (*h1)[i] + f2[i] * (*h2)[i];
              return s * x.field("f1").quad_weight() +
                     em_energy(c, x, "E", "B");
            },
            [h1, h2, c, zero_like](const State& x) {
              State g = zero_like();
              Sp g1 = g.field("f1").data(), g2 = g.field("f2").data();
              for (std::size_t i = 0; i < g1.size(); ++i) {
                g1[i] += (*h1)[i];
                g2[i] += (*h2)[i];
              }
              em_deriv(c, x, g, "E", "B");
              return g;
            }};
  }
  throw SchemaError("no hamiltonian for bracket: " + bracket_name);
}

}  // namespace pb
