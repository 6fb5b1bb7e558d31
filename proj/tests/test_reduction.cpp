#include <doctest.h>

#include <cmath>
#include <memory>
#include <numbers>
#include <random>

#include "pb/functional.hpp"
#include "pb/reduction.hpp"

using namespace pb;

namespace {

constexpr double kTau = 2.0 * std::numbers::pi;

GridPtr grid1d(int n) {
  return std::make_shared<Grid3>(std::array<int, 3>{n, 1, 1},
                                 std::array<double, 3>{kTau, 1, 1});
}

}  // namespace

TEST_CASE("binary_sum is a Poisson map hydro_binary -> classical_binary") {
  auto g = grid1d(6);
  Constants c;
  Bracket fine = make_bracket("hydro_binary", g);
  Bracket coarse = make_bracket("classical_binary", g);
  ProjectionMap map = binary_sum(g);
  PoissonMapReport rep = verify_poisson_map(map, fine, coarse, c, 3, 1e-8);
  CHECK(rep.max_residual < 1e-8);
  CHECK(rep.pass);
}

TEST_CASE("total_density is a Poisson map classical_binary -> hydro") {
  auto g = grid1d(6);
  Constants c;
  Bracket fine = make_bracket("classical_binary", g);
  Bracket coarse = make_bracket("hydro", g);
  ProjectionMap map = total_density(g);
  PoissonMapReport rep = verify_poisson_map(map, fine, coarse, c, 3, 1e-8);
  CHECK(rep.max_residual < 1e-8);
  CHECK(rep.pass);
}

TEST_CASE("plasma_to_fluid computes Maxwellian moments correctly") {
  auto g = grid1d(4);
  auto ph = std::make_shared<PhaseGrid>(*g, std::array<int, 3>{48, 1, 1},
                                        std::array<double, 3>{6, 6, 6});
  Constants c;
  ProjectionMap map = plasma_to_fluid(g, ph, c);
  Bracket vl = make_bracket("vlasov", g, ph);
  State f = vl.make_state();
  // collapsed momentum axes carry a single node with weight 2*pmax, so
  // spread the distribution uniformly across them: f = Maxwellian / (12*12)
  const double n0 = 1.2, u0 = 0.4, T = 0.5;
  const double wyz = ph->pspacing(1) * ph->pspacing(2);
  for (std::size_t r = 0; r < g->size(); ++r)
    for (std::size_t q = 0; q < ph->momentum_size(); ++q) {
      const double p = ph->pcoord(0, static_cast<int>(q));
      f.field("f").data()[ph->index(r, q)] =
          n0 / std::sqrt(2 * std::numbers::pi * T) *
          std::exp(-(p - u0) * (p - u0) / (2 * T)) / wyz;
    }
  CHECK(ph->boundary_mass(f.field("f").data()) < 1e-8);
  State fluid = map.project(f);
  for (std::size_t r = 0; r < g->size(); ++r) {
    CHECK(fluid.field("rho").data()[r] == doctest::Approx(n0).epsilon(1e-9));
    CHECK(fluid.field("u").comp(0)[r] ==
          doctest::Approx(n0 * u0).epsilon(1e-9));
    // collapsed axes sit at p = -pmax, so their moment is -pmax * n0
    CHECK(fluid.field("u").comp(1)[r] ==
          doctest::Approx(-6.0 * n0).epsilon(1e-9));
  }
  // entropy moment against the analytic Maxwellian value, including the
  // ln(wyz) shift from spreading f over the collapsed axes
  const double sref =
      n0 * (0.5 * std::log(2 * std::numbers::pi * T) + 0.5 - std::log(n0) +
            std::log(wyz));
  CHECK(fluid.field("s").data()[0] == doctest::Approx(sref).epsilon(1e-9));
}

TEST_CASE("plasma_to_fluid is a Poisson map on moment functionals") {
  // resolved Maxwellians with gentle spatial modulation; check
  // {F,H}_coarse(pi(x)) = {F o pi, H o pi}_fine(x) for rho/u moments
  auto g = grid1d(8);
  auto ph = std::make_shared<PhaseGrid>(*g, std::array<int, 3>{48, 1, 1},
                                        std::array<double, 3>{6, 6, 6});
  Constants c;
  Bracket fine = make_bracket("vlasov", g, ph);
  Bracket coarse = make_bracket("hydro", g);
  ProjectionMap map = make_projection("plasma_to_fluid", g, ph, c);
  const double wyz = ph->pspacing(1) * ph->pspacing(2);
  State x = fine.make_state();
  for (std::size_t r = 0; r < g->size(); ++r) {
    const double xr = g->coord(0, static_cast<int>(r));
    const double n = 1.0 + 0.1 * std::cos(xr);
    const double u = 0.1 * std::sin(xr);
    const double T = 0.3;
    for (std::size_t q = 0; q < ph->momentum_size(); ++q) {
      const double p = ph->pcoord(0, static_cast<int>(q));
      x.field("f").data()[ph->index(r, q)] =
          n / std::sqrt(2 * std::numbers::pi * T) *
          std::exp(-(p - u) * (p - u) / (2 * T)) / wyz;
    }
  }
  CHECK(ph->boundary_mass(x.field("f").data()) < 1e-8);

  // moment functionals: weighted integrals of rho and u_x
  auto moment = [&](const char* field, int comp, double phase) {
    Functional F;
    F.name = std::string("moment_") + field;
    F.evaluate = [=](const State& y) {
      double s = 0.0;
      const auto d = y.field(field).comp(comp);
      for (std::size_t r = 0; r < g->size(); ++r)
        s += std::cos(g->coord(0, static_cast<int>(r)) + phase) * d[r];
      return s * g->quad_weight();
    };
    F.derivative = [=](const State& y) {
      State dF(y.schema(), y.grid());
      auto d = dF.field(field).comp(comp);
      for (std::size_t r = 0; r < g->size(); ++r)
        d[r] = std::cos(g->coord(0, static_cast<int>(r)) + phase);
      return dF;
    };
    return F;
  };
  const std::vector<Functional> suite = {moment("rho", 0, 0.0),
                                         moment("u", 0, 0.7),
                                         moment("u", 0, 2.1)};
  const State px = map.project(x);
  double worst = 0.0;
  for (const auto& F : suite)
    for (const auto& H : suite) {
      const double cv = coarse.value(c, px, F.derivative(px), H.derivative(px));
      const Functional Ff = map.pullback(F);
      const Functional Hf = map.pullback(H);
      const double fv = fine.value(c, x, Ff.derivative(x), Hf.derivative(x));
      worst = std::max(worst, std::abs(cv - fv) / (1.0 + std::abs(cv)));
    }
  CHECK(worst < 1e-5);
}

TEST_CASE("momentum shift: emhd pushforward equals emhd_total") {
  auto g = grid1d(6);
  Constants c;
  Bracket fine = make_bracket("emhd", g);
  Bracket coarse = make_bracket("emhd_total", g);
  ProjectionMap map = momentum_shift(g, c);
  PoissonMapReport rep = verify_poisson_map(map, fine, coarse, c, 5, 1e-9);
  CHECK(rep.max_residual < 1e-9);
  CHECK(rep.pass);

  // pointwise: M = u + eps0 E x B
  std::mt19937_64 rng(19);
  State x = fine.make_state();
  randomize_state_modes(x, 1, 0.2, rng);
  State y = map.project(x);
  const Field& E = x.field("E");
  const Field& B = x.field("B");
  for (std::size_t q = 0; q < g->size(); ++q) {
    const double exb =
        E.comp(1)[q] * B.comp(2)[q] - E.comp(2)[q] * B.comp(1)[q];
    CHECK(y.field("M").comp(0)[q] ==
          doctest::Approx(x.field("u").comp(0)[q] + c.eps0 * exb)
              .epsilon(1e-13));
  }
  // and the inverse shift undoes it
  ProjectionMap inv = momentum_shift(g, c, true);
  State back = inv.project(y);
  for (std::size_t i = 0; i < x.ncoeffs(); ++i)
    CHECK(std::abs(back.coeff(i) - x.coeff(i)) < 1e-14);
}

TEST_CASE("projection rejects schema mismatches") {
  auto g = grid1d(4);
  Constants c;
  ProjectionMap map = total_density(g);
  Bracket em = make_bracket("em", g);
  State x = em.make_state();
  CHECK_THROWS_AS(map.project(x), SchemaError);
  CHECK_THROWS_AS(make_projection("nosuch", g, nullptr, c), SchemaError);
}
