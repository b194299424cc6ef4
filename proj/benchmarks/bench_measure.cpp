#include "ngm/fisher.hpp"
#include "ngm/fock.hpp"
#include "ngm/measure.hpp"
#include "ngm/wigner.hpp"

#include <benchmark/benchmark.h>

namespace {

ngm::FockDensityMatrix cat_state() { return ngm::FockDensityMatrix::pure(ngm::cat(1.5, ngm::Parity::Odd, 40)); }

void BM_MeasureFromField(benchmark::State& state) {
  const auto rho = cat_state();
  const auto field = ngm::wigner_from_fock(rho, ngm::auto_grid(rho, {.points = static_cast<std::size_t>(state.range(0))}));
  for (auto _ : state) benchmark::DoNotOptimize(ngm::ngm(field));
}
BENCHMARK(BM_MeasureFromField)->Arg(257)->Arg(513)->Unit(benchmark::kMillisecond);

// Grid choice, synthesis and integration together.
void BM_MeasureEndToEnd(benchmark::State& state) {
  const auto rho = cat_state();
  for (auto _ : state) benchmark::DoNotOptimize(ngm::ngm(rho));
}
BENCHMARK(BM_MeasureEndToEnd)->Unit(benchmark::kMillisecond);

void BM_FisherMatrix(benchmark::State& state) {
  const auto rho = cat_state();
  const auto grid = ngm::auto_grid(rho, {.points = 257});
  for (auto _ : state) benchmark::DoNotOptimize(ngm::fisher_matrix(rho, grid));
}
BENCHMARK(BM_FisherMatrix)->Unit(benchmark::kMillisecond);

void BM_ProductCheck(benchmark::State& state) {
  const auto a = cat_state();
  const auto vac = ngm::FockDensityMatrix::pure(ngm::coherent(0.0, 1));
  for (auto _ : state)
    benchmark::DoNotOptimize(ngm::product_measure_check(a, vac, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_ProductCheck)->Arg(97)->Iterations(1)->Unit(benchmark::kMillisecond);

}  // namespace
