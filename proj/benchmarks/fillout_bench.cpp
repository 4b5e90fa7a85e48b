#include <benchmark/benchmark.h>

#include "gperiods/fillout.hpp"
#include "gperiods/periods.hpp"

namespace {

void BM_SampleImage(benchmark::State& state) {
  const gp::LaurentMap map(static_cast<std::uint64_t>(state.range(0)));
  gp::SampleOptions opts;
  opts.strategy = state.range(1) == 0 ? gp::SampleStrategy::grid : gp::SampleStrategy::random;
  for (auto _ : state) {
    auto samples = gp::sample_image(map, 1000000, opts);
    benchmark::DoNotOptimize(samples.data());
  }
  state.SetItemsProcessed(state.iterations() * 1000000);
}
BENCHMARK(BM_SampleImage)->Args({3, 0})->Args({3, 1})->Args({7, 0})->Unit(benchmark::kMillisecond);

void BM_Coverage(benchmark::State& state) {
  const auto set = gp::compute_period_set(13063, 1347, 1, gp::ColorMode::standard);
  const auto points = gp::values_of(set.orbits);
  const auto samples = gp::sample_image(3, 1000000);
  for (auto _ : state) benchmark::DoNotOptimize(gp::coverage_against(points, samples, 0.05));
}
BENCHMARK(BM_Coverage)->Unit(benchmark::kMillisecond);

}  // namespace
