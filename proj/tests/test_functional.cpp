#include <doctest.h>

#include <cmath>
#include <memory>
#include <numbers>
#include <random>

#include "pb/functional.hpp"

using namespace pb;

namespace {

GridPtr grid6() {
  return std::make_shared<Grid3>(std::array<int, 3>{6, 1, 1},
                                 std::array<double, 3>{2 * std::numbers::pi, 1, 1});
}

StateSchema mixed_schema() {
  return StateSchema({{"u", FieldKind::vector, -1},
                      {"rho", FieldKind::scalar, 1}});
}

}  // namespace

TEST_CASE("band-limited fill respects the mean and the band") {
  auto g = grid6();
  std::mt19937_64 rng(5);
  std::vector<double> f(g->size());
  fill_band_limited(f, *g, 1, 2.0, 0.3, rng);
  double mean = g->integrate(f) / (2 * std::numbers::pi);
  CHECK(mean == doctest::Approx(2.0).epsilon(1e-12));
  // mode <= 1 content: second derivative equals minus the fluctuation
  std::vector<double> d1(g->size()), d2(g->size());
  g->derivative(f, d1, 0);
  g->derivative(d1, d2, 0);
  for (std::size_t i = 0; i < f.size(); ++i)
    CHECK(d2[i] == doctest::Approx(-(f[i] - mean)).epsilon(1e-10));
}

TEST_CASE("collapsed axes carry no modes, so fills cannot stack aliases") {
  auto g = grid6();
  std::mt19937_64 rng(0);
  // on a quasi-1D grid only 2 modes (+-1 along x) remain; worst case
  // deviation from the mean is bounded by 2*amp + cross terms
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> f(g->size());
    fill_band_limited(f, *g, 1, 1.0, 0.2, rng);
    for (double v : f) CHECK(v > 0.0);
  }
}

TEST_CASE("test functional suite derivatives match finite differences") {
  auto g = grid6();
  State x(mixed_schema(), g);
  std::mt19937_64 rng(9);
  randomize_state(x, 1, 0.2, rng);
  for (const auto& f : test_functional_suite(x, 17))
    CHECK(derivative_mismatch(f, x) < 1e-8);
}

TEST_CASE("numeric derivative recovers an analytic gradient") {
  auto g = grid6();
  State x(mixed_schema(), g);
  std::mt19937_64 rng(13);
  randomize_state(x, 1, 0.2, rng);
  // F = (1/2) int rho^2: dF/drho = rho
  Functional F{
      "half_rho_sq",
      [](const State& s) {
        const auto r = s.field("rho").data();
        std::vector<double> sq(r.begin(), r.end());
        for (auto& v : sq) v *= v;
        return 0.5 * s.grid()->integrate(sq);
      },
      nullptr};
  State num = numeric_derivative(F, x);
  const auto r = x.field("rho").data();
  const auto nr = num.field("rho").data();
  for (std::size_t i = 0; i < r.size(); ++i)
    CHECK(nr[i] == doctest::Approx(r[i]).epsilon(1e-7));
  for (std::size_t i = 0; i < num.field("u").data().size(); ++i)
    CHECK(std::abs(num.field("u").data()[i]) < 1e-9);
}

TEST_CASE("phase-mode fills are band-limited along momentum too") {
  Grid3 sp({6, 1, 1}, {2 * std::numbers::pi, 1, 1});
  auto pg = std::make_shared<PhaseGrid>(sp, std::array<int, 3>{6, 1, 1},
                                        std::array<double, 3>{4, 4, 4});
  std::mt19937_64 rng(3);
  std::vector<double> f(pg->size());
  fill_band_limited_phase_modes(f, *pg, 1, 1.0, 0.1, rng);
  // second momentum derivative of each mode-1 component reproduces
  // -(pi/pmax)^2 times the fluctuation
  std::vector<double> d1(f.size()), d2(f.size());
  pg->derivative(f, d1, Axis::p1);
  pg->derivative(d1, d2, Axis::p1);
  const double k2 = std::pow(std::numbers::pi / 4.0, 2);
  // split off the spatial-only part (momentum mean) before comparing
  std::vector<double> mean_p(sp.size(), 0.0);
  for (std::size_t r = 0; r < sp.size(); ++r) {
    for (std::size_t q = 0; q < pg->momentum_size(); ++q)
      mean_p[r] += f[pg->index(r, q)];
    mean_p[r] /= static_cast<double>(pg->momentum_size());
  }
  for (std::size_t r = 0; r < sp.size(); ++r)
    for (std::size_t q = 0; q < pg->momentum_size(); ++q) {
      const std::size_t i = pg->index(r, q);
      CHECK(d2[i] ==
            doctest::Approx(-k2 * (f[i] - mean_p[r])).epsilon(1e-9));
    }
}
