#include <doctest.h>

#include <cmath>
#include <memory>
#include <numbers>
#include <vector>

#include "pb/grid.hpp"

using namespace pb;

namespace {
constexpr double kTau = 2.0 * std::numbers::pi;
}

TEST_CASE("spectral diff matrix is exactly skew-symmetric") {
  for (int n : {4, 5, 6, 7, 16, 33}) {
    auto d = spectral_diff_matrix(n, 3.7);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        CHECK(d[i * n + j] == -d[j * n + i]);  // bitwise, not approximate
  }
}

TEST_CASE("spectral derivative is exact on resolved modes") {
  for (int n : {8, 9, 16}) {
    const double L = 5.0;
    Grid3 g({n, 1, 1}, {L, 1, 1});
    for (int k = 1; k <= (n - 1) / 2; ++k) {
      std::vector<double> f(n), df(n);
      for (int i = 0; i < n; ++i)
        f[i] = std::sin(kTau * k * g.coord(0, i) / L);
      g.derivative(f, df, 0);
      for (int i = 0; i < n; ++i) {
        const double exact =
            (kTau * k / L) * std::cos(kTau * k * g.coord(0, i) / L);
        CHECK(df[i] == doctest::Approx(exact).epsilon(1e-11));
      }
    }
  }
}

TEST_CASE("derivative along a collapsed axis vanishes") {
  Grid3 g({8, 1, 1}, {kTau, 1, 1});
  std::vector<double> f(g.size(), 1.25), df(g.size());
  g.derivative(f, df, 1);
  for (double v : df) CHECK(v == 0.0);
}

TEST_CASE("integration is spectrally exact for periodic data") {
  Grid3 g({8, 4, 1}, {kTau, kTau, 1});
  std::vector<double> f(g.size());
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 4; ++j)
      f[g.index(i, j, 0)] =
          2.0 + std::cos(g.coord(0, i)) * std::sin(g.coord(1, j));
  // mean term integrates to 2 * area, the mode-1 product to zero
  CHECK(g.integrate(f) == doctest::Approx(2.0 * kTau * kTau).epsilon(1e-13));
}

TEST_CASE("integration by parts holds to roundoff") {
  Grid3 g({9, 1, 1}, {kTau, 1, 1});
  std::vector<double> u(g.size()), v(g.size()), du(g.size()), dv(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.coord(0, static_cast<int>(i));
    u[i] = std::sin(x) + 0.3 * std::cos(2 * x);
    v[i] = 1.0 + std::cos(x);
  }
  g.derivative(u, du, 0);
  g.derivative(v, dv, 0);
  std::vector<double> a(g.size()), b(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    a[i] = u[i] * dv[i];
    b[i] = du[i] * v[i];
  }
  CHECK(std::abs(g.integrate(a) + g.integrate(b)) < 1e-13);
}

TEST_CASE("distinct-axis derivatives commute (div curl = 0 exactly)") {
  Grid3 g({4, 4, 4}, {kTau, kTau, kTau});
  std::vector<double> f(g.size()), d1(g.size()), d2(g.size());
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        f[g.index(i, j, k)] = std::sin(g.coord(0, i)) *
                              std::cos(g.coord(1, j)) *
                              (1.0 + 0.5 * std::sin(g.coord(2, k)));
  g.derivative(f, d1, 0);
  g.derivative(d1, d2, 1);
  std::vector<double> e1(g.size()), e2(g.size());
  g.derivative(f, e1, 1);
  g.derivative(e1, e2, 0);
  for (std::size_t i = 0; i < g.size(); ++i)
    CHECK(std::abs(d2[i] - e2[i]) < 1e-12);
}

TEST_CASE("phase grid momentum integral and boundary mass") {
  Grid3 sp({4, 1, 1}, {kTau, 1, 1});
  PhaseGrid pg(sp, {16, 1, 1}, {4.0, 4.0, 4.0});
  CHECK(pg.size() == sp.size() * 16);
  std::vector<double> f(pg.size());
  for (std::size_t r = 0; r < sp.size(); ++r)
    for (int p = 0; p < 16; ++p) {
      const double pp = pg.pcoord(0, p);
      f[pg.index(r, p)] = std::exp(-pp * pp);
    }
  std::vector<double> rho(sp.size());
  pg.momentum_integral(f, rho);
  // sum w_p exp(-p^2) approximates sqrt(pi) times the collapsed-axis box
  // volume (2*pmax)^2; identical at every r
  for (double v : rho) CHECK(v == doctest::Approx(rho[0]));
  CHECK(rho[0] == doctest::Approx(std::sqrt(std::numbers::pi) * 64.0)
                      .epsilon(1e-6));
  CHECK(pg.boundary_mass(f) == doctest::Approx(std::exp(-16.0)));
}

TEST_CASE("grid rejects bad dimensions") {
  CHECK_THROWS_AS(Grid3({0, 1, 1}, {1, 1, 1}), ValidationError);
  CHECK_THROWS_AS(Grid3({4, 1, 1}, {0, 1, 1}), ValidationError);
}
