#include "ngm/channels.hpp"
#include "ngm/fock.hpp"
#include "ngm/wigner.hpp"

#include <benchmark/benchmark.h>

namespace {

ngm::FockDensityMatrix cat_state() { return ngm::FockDensityMatrix::pure(ngm::cat(1.5, ngm::Parity::Even, 40)); }

void BM_KrausThermalLoss(benchmark::State& state) {
  const auto rho = cat_state().embedded(60);
  const ngm::ThermalLossSpec spec(0.7, static_cast<double>(state.range(0)) / 10.0);
  for (auto _ : state) benchmark::DoNotOptimize(ngm::thermal_loss_fock(rho, spec));
}
BENCHMARK(BM_KrausThermalLoss)->Arg(0)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_GaussianConvolve(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto field = ngm::wigner_from_fock(cat_state(), ngm::PhaseSpaceGrid(-8, 8, -8, 8, n, n));
  const Eigen::Matrix2d cov = 0.15 * Eigen::Matrix2d::Identity();
  for (auto _ : state) benchmark::DoNotOptimize(ngm::gaussian_convolve(field, cov));
}
BENCHMARK(BM_GaussianConvolve)->Arg(257)->Arg(513)->Unit(benchmark::kMillisecond);

void BM_Rescale(benchmark::State& state) {
  const auto field = ngm::wigner_from_fock(cat_state(), ngm::PhaseSpaceGrid(-8, 8, -8, 8, 513, 513));
  for (auto _ : state) benchmark::DoNotOptimize(ngm::rescale(field, 0.8));
}
BENCHMARK(BM_Rescale)->Unit(benchmark::kMillisecond);

void BM_PhaseSpaceChannel(benchmark::State& state) {
  const auto rho = cat_state();
  const auto field = ngm::wigner_from_fock(rho, ngm::auto_grid(rho, {.extent_sigmas = 7}));
  const ngm::ThermalLossSpec spec(0.7, 0.2);
  for (auto _ : state) benchmark::DoNotOptimize(ngm::thermal_loss_phase_space(field, spec));
}
BENCHMARK(BM_PhaseSpaceChannel)->Unit(benchmark::kMillisecond);

}  // namespace
