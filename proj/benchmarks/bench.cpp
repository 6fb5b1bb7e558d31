#include <benchmark/benchmark.h>

#include <memory>
#include <numbers>
#include <random>

#include "pb/dense.hpp"
#include "pb/dynamics.hpp"
#include "pb/functional.hpp"
#include "pb/hamiltonians.hpp"

namespace {

constexpr double kTau = 2.0 * std::numbers::pi;

pb::GridPtr cube(int n) {
  return std::make_shared<pb::Grid3>(std::array<int, 3>{n, n, n},
                                     std::array<double, 3>{kTau, kTau, kTau});
}

void BM_bracket_apply_mhd(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto g = cube(n);
  pb::Bracket b = pb::make_bracket("mhd", g);
  pb::Constants c;
  std::mt19937_64 rng(1);
  pb::State x = b.make_state();
  pb::randomize_state(x, 1, 0.2, rng);
  pb::State dH = b.make_state();
  pb::randomize_state(dH, 1, 0.5, rng);
  pb::State out = b.make_state();
  for (auto _ : state) {
    b.apply_into(c, x, dH, out);
    benchmark::DoNotOptimize(out);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(x.ncoeffs()));
}
BENCHMARK(BM_bracket_apply_mhd)->Arg(8)->Arg(16);

void BM_rk4_step_em(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto g = cube(n);
  pb::Bracket b = pb::make_bracket("em", g);
  pb::Constants c;
  pb::State x = b.make_state();
  std::mt19937_64 rng(2);
  pb::randomize_state(x, 1, 0.2, rng);
  pb::Functional H = pb::make_hamiltonian("em", c, x);
  const double dt = 0.01;
  for (auto _ : state) {
    x = pb::step_rk4(b, c, H, x, dt);
    benchmark::DoNotOptimize(x);
  }
}
BENCHMARK(BM_rk4_step_em)->Arg(8)->Arg(16);

void BM_dense_bivector_hydro(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto g = std::make_shared<pb::Grid3>(std::array<int, 3>{n, 1, 1},
                                       std::array<double, 3>{kTau, 1, 1});
  pb::Bracket b = pb::make_bracket("hydro", g);
  pb::Constants c;
  std::mt19937_64 rng(3);
  pb::State x = b.make_state();
  pb::randomize_state(x, 1, 0.2, rng);
  for (auto _ : state) {
    auto A = pb::dense_bivector(b, c, x);
    benchmark::DoNotOptimize(A);
  }
}
BENCHMARK(BM_dense_bivector_hydro)->Arg(4)->Arg(6);

}  // namespace

BENCHMARK_MAIN();
