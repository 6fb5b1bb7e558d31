#include "pb/functional.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <tuple>

namespace pb {

State numeric_derivative(const Functional& f, const State& x, double h) {
  State g = x;
  g.fill(0.0);
  State xp = x;
  const std::size_t n = x.ncoeffs();
  for (std::size_t i = 0; i < n; ++i) {
    const double v = x.coeff(i);
    xp.set_coeff(i, v + h);
    const double fp = f.evaluate(xp);
    xp.set_coeff(i, v - h);
    const double fm = f.evaluate(xp);
    xp.set_coeff(i, v);
    g.set_coeff(i, (fp - fm) / (2.0 * h * x.coeff_weight(i)));
  }
  return g;
}

double derivative_mismatch(const Functional& f, const State& x, double h) {
  const State num = numeric_derivative(f, x, h);
  const State ana = f.derivative(x);
  double worst = 0.0;
  for (std::size_t i = 0; i < x.ncoeffs(); ++i)
    worst = std::max(worst, std::abs(num.coeff(i) - ana.coeff(i)));
  return worst;
}

namespace {

// One real Fourier mode per wavevector: a*cos(k.x) + b*sin(k.x).
struct Mode {
  std::array<int, 3> k;
  double a, b;
};

std::vector<Mode> draw_modes(int kmax, double amp,
                             const std::array<int, 3>& dims,
                             std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-amp, amp);
  std::vector<Mode> modes;
  // Collapsed axes (one point) cannot carry a wave; such modes would alias
  // to constants and pile onto the mean.
  const int k1 = dims[0] > 1 ? kmax : 0;
  const int k2 = dims[1] > 1 ? kmax : 0;
  const int k3 = dims[2] > 1 ? kmax : 0;
  for (int kx = -k1; kx <= k1; ++kx)
    for (int ky = -k2; ky <= k2; ++ky)
      for (int kz = -k3; kz <= k3; ++kz) {
        if (kx == 0 && ky == 0 && kz == 0) continue;
        // Keep only one of each +-k pair; cos/sin already span both.
        if (std::make_tuple(kx, ky, kz) < std::make_tuple(-kx, -ky, -kz))
          continue;
        modes.push_back({{kx, ky, kz}, u(rng), u(rng)});
      }
  return modes;
}

}  // namespace

void fill_band_limited(std::span<double> out, const Grid3& g, int kmax,
                       double mean, double amp, std::mt19937_64& rng) {
  auto modes = draw_modes(kmax, amp, g.dims(), rng);
  for (int i = 0; i < g.dims()[0]; ++i)
    for (int j = 0; j < g.dims()[1]; ++j)
      for (int k = 0; k < g.dims()[2]; ++k) {
        double v = mean;
        const double x = g.coord(0, i), y = g.coord(1, j), z = g.coord(2, k);
        for (const auto& m : modes) {
          const double ph = 2.0 * std::numbers::pi *
                            (m.k[0] * x / g.lengths()[0] +
                             m.k[1] * y / g.lengths()[1] +
                             m.k[2] * z / g.lengths()[2]);
          v += m.a * std::cos(ph) + m.b * std::sin(ph);
        }
        out[g.index(i, j, k)] = v;
      }
}

void fill_band_limited_phase(std::span<double> out, const PhaseGrid& g,
                             int kmax, double mean, double amp,
                             std::mt19937_64& rng) {
  // Spatially band-limited modulation times a Gaussian momentum envelope,
  // so the density is positive and decays toward the momentum boundary.
  std::vector<double> spatial(g.spatial().size());
  fill_band_limited(spatial, g.spatial(), kmax, mean, amp, rng);
  const auto& pd = g.pdims();
  std::vector<double> envelope(g.momentum_size());
  for (int q0 = 0; q0 < pd[0]; ++q0)
    for (int q1 = 0; q1 < pd[1]; ++q1)
      for (int q2 = 0; q2 < pd[2]; ++q2) {
        double arg = 0.0;
        const std::array<int, 3> qi{q0, q1, q2};
        for (int a = 0; a < 3; ++a) {
          if (pd[a] <= 1) continue;
          const double sigma = g.pmax()[a] / 3.0;
          const double p = g.pcoord(a, qi[a]);
          arg += p * p / (2.0 * sigma * sigma);
        }
        const std::size_t q =
            (static_cast<std::size_t>(q0) * pd[1] + q1) * pd[2] + q2;
        envelope[q] = std::exp(-arg);
      }
  for (std::size_t r = 0; r < spatial.size(); ++r)
    for (std::size_t q = 0; q < envelope.size(); ++q)
      out[g.index(r, q)] = spatial[r] * envelope[q];
}

void fill_band_limited_phase_modes(std::span<double> out, const PhaseGrid& g,
                                   int kmax, double mean, double amp,
                                   std::mt19937_64& rng) {
  std::vector<double> spatial(g.spatial().size());
  fill_band_limited(spatial, g.spatial(), kmax, mean, amp, rng);
  // Momentum box as an auxiliary periodic grid; modes of the product stay
  // within kmax per axis.
  Grid3 pbox(g.pdims(), {2.0 * g.pmax()[0], 2.0 * g.pmax()[1],
                         2.0 * g.pmax()[2]});
  std::vector<double> mom(g.momentum_size());
  fill_band_limited(mom, pbox, kmax, 1.0, amp, rng);
  for (std::size_t r = 0; r < spatial.size(); ++r)
    for (std::size_t q = 0; q < mom.size(); ++q)
      out[g.index(r, q)] = spatial[r] * mom[q];
}

void randomize_state(State& x, int kmax, double amp, std::mt19937_64& rng) {
  for (std::size_t i = 0; i < x.nfields(); ++i) {
    const auto& e = x.schema().entries()[i];
    Field& f = x.field(static_cast<int>(i));
    if (e.kind == FieldKind::phase) {
      fill_band_limited_phase(f.data(), *f.phase_grid(), kmax, 1.0, amp, rng);
      continue;
    }
    const bool positive =
        e.name == "rho" || e.name == "rho1" || e.name == "rho2" ||
        e.name == "s" || e.name == "s1" || e.name == "s2";
    const double mean = positive ? 1.0 : 0.0;
    for (int c = 0; c < f.ncomp(); ++c)
      fill_band_limited(f.comp(c), *f.grid(), kmax, mean, amp, rng);
  }
}

void randomize_state_modes(State& x, int kmax, double amp,
                           std::mt19937_64& rng) {
  for (std::size_t i = 0; i < x.nfields(); ++i) {
    const auto& e = x.schema().entries()[i];
    Field& f = x.field(static_cast<int>(i));
    if (e.kind == FieldKind::phase) {
      fill_band_limited_phase_modes(f.data(), *f.phase_grid(), kmax, 1.0, amp,
                                    rng);
      continue;
    }
    const bool positive =
        e.name == "rho" || e.name == "rho1" || e.name == "rho2" ||
        e.name == "s" || e.name == "s1" || e.name == "s2";
    const double mean = positive ? 1.0 : 0.0;
    for (int c = 0; c < f.ncomp(); ++c)
      fill_band_limited(f.comp(c), *f.grid(), kmax, mean, amp, rng);
  }
}

std::vector<Functional> test_functional_suite(const State& prototype,
                                              std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto kernel = std::make_shared<State>(prototype);
  // Band-limited in every axis so products in the discrete-identity tests
  // stay alias-free.
  randomize_state_modes(*kernel, 1, 0.5, rng);

  std::vector<Functional> suite;

  suite.push_back(Functional{
      "linear",
      [kernel](const State& x) { return dot(*kernel, x); },
      [kernel](const State& x) {
        (void)x;
        return *kernel;
      }});

  suite.push_back(Functional{
      "quadratic",
      [kernel](const State& x) {
        State wx = x;
        for (std::size_t i = 0; i < x.ncoeffs(); ++i)
          wx.set_coeff(i, kernel->coeff(i) * x.coeff(i));
        return 0.5 * dot(wx, x);
      },
      [kernel](const State& x) {
        State g = x;
        for (std::size_t i = 0; i < x.ncoeffs(); ++i)
          g.set_coeff(i, kernel->coeff(i) * x.coeff(i));
        return g;
      }});

  suite.push_back(Functional{
      "cubic",
      [](const State& x) {
        double s = 0.0;
        for (std::size_t i = 0; i < x.ncoeffs(); ++i) {
          const double v = x.coeff(i);
          s += x.coeff_weight(i) * v * v * v;
        }
        return s / 3.0;
      },
      [](const State& x) {
        State g = x;
        for (std::size_t i = 0; i < x.ncoeffs(); ++i)
          g.set_coeff(i, x.coeff(i) * x.coeff(i));
        return g;
      }});

  return suite;
}

}  // namespace pb
