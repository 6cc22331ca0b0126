// Serial reference kernels against their OpenMP versions.

#include <benchmark/benchmark.h>

#include "rwuq/coherence.hpp"
#include "rwuq/kernels/kernels.hpp"
#include "rwuq/sampling.hpp"

using namespace rwuq;

namespace {

Shape square(std::int64_t side) { return {static_cast<std::size_t>(side), static_cast<std::size_t>(side)}; }

template <bool Parallel>
void BM_LocalCoherence(benchmark::State& state) {
  const Shape shape = square(state.range(0));
  for (auto _ : state) {
    auto k = Parallel ? kernels::parallel::local_coherence(shape) : kernels::serial::local_coherence(shape);
    benchmark::DoNotOptimize(k.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(shape.size()));
}

template <bool Parallel>
void BM_RowEnergy(benchmark::State& state) {
  const Shape shape = square(state.range(0));
  const auto profile = local_coherence(shape);
  const auto pattern = sample_reweighted(profile.nu, shape.size() * 6 / 10, 1);
  RealVector coeffs(pattern.m());
  for (std::size_t t = 0; t < coeffs.size(); ++t) coeffs[t] = static_cast<double>(pattern.gamma[t]);
  for (auto _ : state) {
    auto e = Parallel ? kernels::parallel::weighted_row_energy(shape, pattern.omega, coeffs, Domain::haar)
                      : kernels::serial::weighted_row_energy(shape, pattern.omega, coeffs, Domain::haar);
    benchmark::DoNotOptimize(e.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(pattern.m()));
}

}  // namespace

BENCHMARK(BM_LocalCoherence<false>)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LocalCoherence<true>)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RowEnergy<false>)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RowEnergy<true>)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
