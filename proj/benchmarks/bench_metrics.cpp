#include <benchmark/benchmark.h>

#include "srlab/interp.hpp"
#include "srlab/metrics.hpp"
#include "srlab/synth.hpp"

namespace {

void BM_Ssim(benchmark::State& state) {
  const auto size = static_cast<std::size_t>(state.range(0));
  const auto a = srlab::synthesize("mosaic", size, size, 1);
  const auto b = srlab::upscale_bicubic(srlab::downsample_2x(a));
  for (auto _ : state) benchmark::DoNotOptimize(srlab::ssim_rgb(a, b));
  state.SetItemsProcessed(state.iterations() * 3 * state.range(0) * state.range(0));
}
BENCHMARK(BM_Ssim)->Name("metrics/ssim_rgb")->Arg(128)->Arg(512);

void BM_Mse(benchmark::State& state) {
  const auto size = static_cast<std::size_t>(state.range(0));
  const auto a = srlab::synthesize("mosaic", size, size, 1);
  const auto b = srlab::synthesize("mosaic", size, size, 2);
  for (auto _ : state) benchmark::DoNotOptimize(srlab::mse(a, b));
}
BENCHMARK(BM_Mse)->Name("metrics/mse")->Arg(512);

}  // namespace
BENCHMARK_MAIN();
