#include <benchmark/benchmark.h>

#include "gperiods/periods.hpp"
#include "gperiods/png_io.hpp"
#include "gperiods/render.hpp"

namespace {

const gp::PeriodSet& big_set() {
  static const gp::PeriodSet set = gp::compute_period_set(9114361, 3082638, 1, gp::ColorMode::standard);
  return set;
}

void BM_Rasterize(benchmark::State& state) {
  const auto& set = big_set();
  gp::RenderSpec spec;
  spec.width = spec.height = static_cast<std::uint32_t>(state.range(0));
  for (auto _ : state) {
    auto img = gp::rasterize(set, spec);
    benchmark::DoNotOptimize(img.bytes().data());
  }
}
BENCHMARK(BM_Rasterize)->Arg(1024)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_RenderLayers(benchmark::State& state) {
  const auto set = gp::compute_period_set(255255, 254, 7, gp::ColorMode::standard);
  gp::RenderSpec spec;
  for (auto _ : state) {
    auto layers = gp::render_layers(set, spec);
    benchmark::DoNotOptimize(layers.data());
  }
}
BENCHMARK(BM_RenderLayers)->Unit(benchmark::kMillisecond);

void BM_EncodePng(benchmark::State& state) {
  gp::RenderSpec spec;
  spec.width = spec.height = 2000;
  const auto img = gp::rasterize(big_set(), spec);
  for (auto _ : state) benchmark::DoNotOptimize(gp::encode_png(img));
}
BENCHMARK(BM_EncodePng)->Unit(benchmark::kMillisecond);

}  // namespace
