#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <random>
#include <vector>

#include "pb/bracket.hpp"
#include "pb/functional.hpp"
#include "pb/hamiltonians.hpp"
#include "pb/verify.hpp"

using namespace pb;

namespace {

constexpr double kTau = 2.0 * std::numbers::pi;

GridPtr grid1d(int n) {
  return std::make_shared<Grid3>(std::array<int, 3>{n, 1, 1},
                                 std::array<double, 3>{kTau, 1, 1});
}

PhaseGridPtr phase1d(const GridPtr& g, int np) {
  return std::make_shared<PhaseGrid>(*g, std::array<int, 3>{np, 1, 1},
                                     std::array<double, 3>{4, 4, 4});
}

bool is_kinetic(const std::string& name) {
  return name == "vlasov" || name == "ked" || name == "ked_binary";
}

Constants constants_for(const std::string& name) {
  Constants c;
  if (name == "ked_binary" || name == "bemhd" || name == "cbemhd") {
    c.m = {1.0, 1.0};
    c.z = {1.0, -1.0};
  }
  return c;
}

// band-limited positive state with solenoidal magnetic fields (1D grid:
// B = curl A keeps div B at roundoff because only x-derivatives act)
State random_physical(const Bracket& b, std::mt19937_64& rng) {
  State x = b.make_state();
  randomize_state_modes(x, 1, 0.2, rng);
  for (const auto& e : x.schema().entries()) {
    if (e.kind != FieldKind::vector || e.name.rfind("B", 0) != 0) continue;
    Field& B = x.field(e.name);
    const Grid3& g = *B.grid();
    Field A(FieldKind::vector, B.grid());
    for (int c = 0; c < 3; ++c) fill_band_limited(A.comp(c), g, 1, 0, 0.2, rng);
    std::vector<double> d1(g.size()), d2(g.size());
    for (int i = 0; i < 3; ++i) {
      const int j = (i + 1) % 3, k = (i + 2) % 3;
      g.derivative(A.comp(k), d1, j);
      g.derivative(A.comp(j), d2, k);
      auto out = B.comp(i);
      for (std::size_t n = 0; n < out.size(); ++n) out[n] = d1[n] - d2[n];
    }
  }
  return x;
}

double max_abs_diff(const State& a, const State& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.ncoeffs(); ++i)
    m = std::max(m, std::abs(a.coeff(i) - b.coeff(i)));
  return m;
}

}  // namespace

TEST_CASE("catalog contains exactly the fourteen named brackets") {
  const auto names = bracket_names();
  CHECK(names.size() == 14);
  for (const char* n :
       {"em_canonical", "em", "vlasov", "hydro", "hydro_binary",
        "classical_binary", "ked", "ked_binary", "emhd", "emhd_total",
        "bemhd", "cbemhd", "mhd", "ehd"})
    CHECK(std::find(names.begin(), names.end(), n) != names.end());
  CHECK_THROWS_AS(make_bracket("nosuch", grid1d(4)), SchemaError);
}

TEST_CASE("full identity battery passes for every catalog bracket") {
  auto g = grid1d(6);
  for (const auto& name : bracket_names()) {
    CAPTURE(name);
    PhaseGridPtr ph = is_kinetic(name) ? phase1d(g, 6) : nullptr;
    Bracket b = make_bracket(name, g, ph);
    for (const auto& r : verify_bracket(b, constants_for(name))) {
      CAPTURE(r.name);
      CAPTURE(r.residual);
      CHECK(r.pass);
    }
  }
}

TEST_CASE("Euler equations: bracket route equals hand-coded route") {
  auto gp = grid1d(8);
  const Grid3& g = *gp;
  Bracket b = make_bracket("hydro", gp);
  Constants c;
  Eos eos = eos_ideal();
  Functional H = make_hamiltonian("hydro", c, b.make_state());
  std::mt19937_64 rng(31);
  for (int rep = 0; rep < 5; ++rep) {
    State x = random_physical(b, rng);
    const Field& u = x.field("u");
    const auto rho = x.field("rho").data();
    const auto s = x.field("s").data();
    const std::size_t n = g.size();

    // independent analytic variational derivative
    State dH = b.make_state();
    for (std::size_t i = 0; i < n; ++i) {
      double u2 = 0;
      for (int k = 0; k < 3; ++k) {
        dH.field("u").comp(k)[i] = u.comp(k)[i] / rho[i];
        u2 += u.comp(k)[i] * u.comp(k)[i];
      }
      dH.field("rho").data()[i] =
          -u2 / (2 * rho[i] * rho[i]) + eos.eps_rho(rho[i], s[i]);
      dH.field("s").data()[i] = eos.eps_s(rho[i], s[i]);
    }
    State dH_lib = H.derivative(x);
    CHECK(max_abs_diff(dH, dH_lib) < 1e-12);

    // hand-coded evolution displays
    State hand = b.make_state();
    std::vector<double> tmp(n), d(n);
    for (int i = 0; i < 3; ++i) {
      auto udot = hand.field("u").comp(i);
      for (int j = 0; j < 3; ++j) {
        for (std::size_t q = 0; q < n; ++q)
          tmp[q] = u.comp(i)[q] * dH.field("u").comp(j)[q];
        g.derivative(tmp, d, j);
        for (std::size_t q = 0; q < n; ++q) udot[q] -= d[q];
        g.derivative(dH.field("u").comp(j), d, i);
        for (std::size_t q = 0; q < n; ++q) udot[q] -= u.comp(j)[q] * d[q];
      }
      g.derivative(dH.field("rho").data(), d, i);
      for (std::size_t q = 0; q < n; ++q) udot[q] -= rho[q] * d[q];
      g.derivative(dH.field("s").data(), d, i);
      for (std::size_t q = 0; q < n; ++q) udot[q] -= s[q] * d[q];
    }
    for (const char* name : {"rho", "s"}) {
      const auto a = x.field(name).data();
      auto adot = hand.field(name).data();
      for (int j = 0; j < 3; ++j) {
        for (std::size_t q = 0; q < n; ++q)
          tmp[q] = a[q] * dH.field("u").comp(j)[q];
        g.derivative(tmp, d, j);
        for (std::size_t q = 0; q < n; ++q) adot[q] -= d[q];
      }
    }

    State lib = b.apply(c, x, dH);
    CHECK(max_abs_diff(hand, lib) < 1e-10);
  }
}

TEST_CASE("uniform hydrodynamic states are exactly stationary") {
  auto gp = grid1d(8);
  Bracket b = make_bracket("hydro", gp);
  Constants c;
  State x = b.make_state();
  x.field("rho").fill(1.3);
  x.field("s").fill(0.7);
  x.field("u").fill(0.25);
  Functional H = make_hamiltonian("hydro", c, x);
  State xdot = b.apply(c, x, H.derivative(x));
  for (std::size_t i = 0; i < xdot.ncoeffs(); ++i)
    CHECK(std::abs(xdot.coeff(i)) < 1e-13);
}

TEST_CASE("MHD: bracket route equals hand-coded route with Lorentz force") {
  auto gp = grid1d(8);
  const Grid3& g = *gp;
  Bracket b = make_bracket("mhd", gp);
  Constants c;
  Eos eos = eos_ideal();
  Functional H = make_hamiltonian("mhd", c, b.make_state());
  std::mt19937_64 rng(57);
  for (int rep = 0; rep < 5; ++rep) {
    State x = random_physical(b, rng);
    const Field& M = x.field("M");
    const Field& B = x.field("B");
    const auto rho = x.field("rho").data();
    const auto s = x.field("s").data();
    const std::size_t n = g.size();

    State dH = H.derivative(x);
    // spot-check the analytic B-derivative
    for (std::size_t q = 0; q < n; ++q)
      CHECK(std::abs(dH.field("B").comp(1)[q] - B.comp(1)[q] / c.mu0) <
            1e-12);

    State hand = b.make_state();
    std::vector<double> tmp(n), d(n);
    // momentum self-advection + advected scalars (same displays as Euler)
    for (int i = 0; i < 3; ++i) {
      auto mdot = hand.field("M").comp(i);
      for (int j = 0; j < 3; ++j) {
        for (std::size_t q = 0; q < n; ++q)
          tmp[q] = M.comp(i)[q] * dH.field("M").comp(j)[q];
        g.derivative(tmp, d, j);
        for (std::size_t q = 0; q < n; ++q) mdot[q] -= d[q];
        g.derivative(dH.field("M").comp(j), d, i);
        for (std::size_t q = 0; q < n; ++q) mdot[q] -= M.comp(j)[q] * d[q];
      }
      g.derivative(dH.field("rho").data(), d, i);
      for (std::size_t q = 0; q < n; ++q) mdot[q] -= rho[q] * d[q];
      g.derivative(dH.field("s").data(), d, i);
      for (std::size_t q = 0; q < n; ++q) mdot[q] -= s[q] * d[q];
      // magnetic force: M_i gains B_j d_j dH_B_i - B_j d_i dH_B_j
      for (int j = 0; j < 3; ++j) {
        g.derivative(dH.field("B").comp(i), d, j);
        for (std::size_t q = 0; q < n; ++q) mdot[q] += B.comp(j)[q] * d[q];
        g.derivative(dH.field("B").comp(j), d, i);
        for (std::size_t q = 0; q < n; ++q) mdot[q] -= B.comp(j)[q] * d[q];
      }
    }
    for (const char* name : {"rho", "s"}) {
      const auto a = x.field(name).data();
      auto adot = hand.field(name).data();
      for (int j = 0; j < 3; ++j) {
        for (std::size_t q = 0; q < n; ++q)
          tmp[q] = a[q] * dH.field("M").comp(j)[q];
        g.derivative(tmp, d, j);
        for (std::size_t q = 0; q < n; ++q) adot[q] -= d[q];
      }
    }
    // induction: Bdot = curl(v x B), built from the explicit cross product
    Field w(FieldKind::vector, gp);
    for (int i = 0; i < 3; ++i) {
      const int j = (i + 1) % 3, k = (i + 2) % 3;
      auto wi = w.comp(i);
      for (std::size_t q = 0; q < n; ++q)
        wi[q] = dH.field("M").comp(j)[q] * B.comp(k)[q] -
                dH.field("M").comp(k)[q] * B.comp(j)[q];
    }
    std::vector<double> d2(n);
    for (int i = 0; i < 3; ++i) {
      const int j = (i + 1) % 3, k = (i + 2) % 3;
      g.derivative(w.comp(k), d, j);
      g.derivative(w.comp(j), d2, k);
      auto bdot = hand.field("B").comp(i);
      for (std::size_t q = 0; q < n; ++q) bdot[q] = d[q] - d2[q];
    }

    State lib = b.apply(c, x, dH);
    CHECK(max_abs_diff(hand, lib) < 1e-9);
  }
}

TEST_CASE("ked with f = 0 reduces to the vacuum field bivector") {
  auto gp = grid1d(6);
  auto ph = phase1d(gp, 6);
  Bracket vl = make_bracket("ked", gp, ph);
  Bracket em = make_bracket("em", gp);
  Constants c;
  std::mt19937_64 rng(3);
  State x = vl.make_state();     // f = 0
  State dH = vl.make_state();
  randomize_state_modes(dH, 1, 0.5, rng);
  State xdot = vl.apply(c, x, dH);
  // fields evolve exactly as in vacuum
  State xe = em.make_state();
  State de = em.make_state();
  for (const char* nm : {"E", "B"}) {
    auto dst = de.field(nm).data();
    auto src = dH.field(nm).data();
    std::copy(src.begin(), src.end(), dst.begin());
  }
  State edot = em.apply(c, xe, de);
  for (const char* nm : {"E", "B"}) {
    const auto a = xdot.field(nm).data();
    const auto b2 = edot.field(nm).data();
    for (std::size_t i = 0; i < a.size(); ++i)
      CHECK(std::abs(a[i] - b2[i]) < 1e-13);
  }
  // and f stays zero
  for (double v : xdot.field("f").data()) CHECK(v == 0.0);
}

TEST_CASE("positivity guard: non-positive density is rejected") {
  auto gp = grid1d(6);
  Bracket b = make_bracket("hydro", gp);
  Constants c;
  State x = b.make_state();
  x.field("rho").fill(-1.0);
  x.field("s").fill(1.0);
  State dH = b.make_state();
  dH.fill(0.1);
  CHECK_THROWS_AS(b.apply(c, x, dH), ValidationError);
}

TEST_CASE("hydro from combinators matches the catalog exactly") {
  auto gp = grid1d(6);
  Bracket base = momentum_bracket(gp, "u");
  Attachment rho{Attachment::Kind::advected_density, "rho", "", 1.0, 1};
  Attachment s{Attachment::Kind::advected_density, "s", "", 1.0, 1};
  Bracket built = semidirect_vector(base, "u", {rho, s}, "hydro_built");
  Bracket ref = make_bracket("hydro", gp);
  Constants c;
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 3; ++rep) {
    State x = built.make_state();
    randomize_state(x, 1, 0.2, rng);
    State d = built.make_state();
    randomize_state(d, 1, 0.5, rng);
    State a = built.apply(c, x, d);
    State b2 = ref.apply(c, x, d);
    CHECK(max_abs_diff(a, b2) < 1e-12);
  }
}

TEST_CASE("canonically coupled charged fluid from combinators") {
  auto gp = grid1d(6);
  Bracket base = momentum_bracket(gp, "M");
  Attachment rho{Attachment::Kind::advected_density, "rho", "", 1.0, 1};
  Attachment s{Attachment::Kind::advected_density, "s", "", 1.0, 1};
  Attachment ay{Attachment::Kind::cotangent_pair, "A", "Y", 1.0, 0};
  Bracket built = semidirect_vector(base, "M", {rho, s, ay}, "emhdc");
  Constants c;
  CHECK(verify_antisymmetry(built, c).pass);
  CHECK(verify_jacobi(built, c, 11, 1e-8).pass);
}

TEST_CASE("direct product applies blockwise and keeps identities") {
  auto gp = grid1d(6);
  Bracket em = make_bracket("em", gp);
  Bracket hy = make_bracket("hydro", gp);
  Bracket prod = direct_product(em, hy);
  Constants c;
  CHECK(prod.schema().size() == 5);
  CHECK(verify_antisymmetry(prod, c).pass);
  std::mt19937_64 rng(23);
  State x = prod.make_state();
  randomize_state(x, 1, 0.2, rng);
  State d = prod.make_state();
  randomize_state(d, 1, 0.5, rng);
  State v = prod.apply(c, x, d);
  // hydro block is independent of the field block
  State xh = hy.make_state(), dh = hy.make_state();
  for (const char* nm : {"u", "rho", "s"}) {
    std::copy(x.field(nm).data().begin(), x.field(nm).data().end(),
              xh.field(nm).data().begin());
    std::copy(d.field(nm).data().begin(), d.field(nm).data().end(),
              dh.field(nm).data().begin());
  }
  State vh = hy.apply(c, xh, dh);
  for (const char* nm : {"u", "rho", "s"}) {
    const auto a = v.field(nm).data();
    const auto b2 = vh.field(nm).data();
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b2[i]);
  }
  // renaming collisions are rejected
  CHECK_THROWS_AS(direct_product(hy, hy), SchemaError);
}

TEST_CASE("ehd: advection block Jacobi-exact, coupling defect reported") {
  auto gp = grid1d(6);
  Bracket b = make_bracket("ehd", gp);
  Constants c;
  const auto checks = verify_bracket(b, c);
  bool saw_adv = false, saw_full = false;
  for (const auto& r : checks) {
    if (r.name == "jacobi (advection block)") {
      saw_adv = true;
      CHECK(r.residual < 1e-8);
      CHECK(r.pass);
    }
    if (r.name == "jacobi (charge coupling, reported)") {
      saw_full = true;
      CHECK(r.residual > 1e-4);  // genuine defect of the coupled bracket
      CHECK(r.pass);             // reported, not gated
    }
  }
  CHECK(saw_adv);
  CHECK(saw_full);
}
