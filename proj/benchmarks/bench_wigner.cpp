#include "ngm/fock.hpp"
#include "ngm/wigner.hpp"

#include <benchmark/benchmark.h>

namespace {

ngm::FockDensityMatrix cat_state(int n_c) {
  return ngm::FockDensityMatrix::pure(ngm::cat(1.5, ngm::Parity::Even, n_c));
}

ngm::PhaseSpaceGrid grid(std::size_t points) { return ngm::PhaseSpaceGrid(-7, 7, -7, 7, points, points); }

void BM_Synthesis(benchmark::State& state) {
  const auto rho = cat_state(static_cast<int>(state.range(0)));
  const auto g = grid(static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(ngm::wigner_from_fock(rho, g));
}
BENCHMARK(BM_Synthesis)->Args({20, 257})->Args({40, 257})->Args({40, 513})->Unit(benchmark::kMillisecond);

void BM_Gradient(benchmark::State& state) {
  const auto rho = cat_state(40);
  const auto g = grid(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ngm::wigner_gradient(rho, g));
}
BENCHMARK(BM_Gradient)->Arg(257)->Arg(513)->Unit(benchmark::kMillisecond);

void BM_PointEvaluation(benchmark::State& state) {
  const auto rho = cat_state(40);
  double q = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ngm::wigner_point(rho.entries(), q, 0.3));
    q += 1e-6;
  }
}
BENCHMARK(BM_PointEvaluation);

void BM_Hessian(benchmark::State& state) {
  const auto rho = cat_state(40);
  const auto g = grid(257);
  for (auto _ : state) benchmark::DoNotOptimize(ngm::wigner_hessian(rho, g));
}
BENCHMARK(BM_Hessian)->Unit(benchmark::kMillisecond);

}  // namespace
