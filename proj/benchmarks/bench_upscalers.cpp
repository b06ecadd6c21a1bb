#include <benchmark/benchmark.h>

#include "srlab/bench.hpp"
#include "srlab/interp.hpp"
#include "srlab/synth.hpp"

namespace {

using srlab::ImagePlane;

ImagePlane input_plane(std::int64_t size) {
  return srlab::synthesize("petals", static_cast<std::size_t>(size), static_cast<std::size_t>(size), 1).plane(0);
}

template <ImagePlane (*Fn)(const ImagePlane&)>
void BM_Upscale(benchmark::State& state) {
  const ImagePlane lr = input_plane(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(Fn(lr));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

ImagePlane nearest(const ImagePlane& p) { return srlab::upscale_nearest(p); }
ImagePlane bilinear(const ImagePlane& p) { return srlab::upscale_bilinear(p); }
ImagePlane bicubic(const ImagePlane& p) { return srlab::upscale_bicubic(p); }
ImagePlane fcbi(const ImagePlane& p) { return srlab::upscale_fcbi(p); }
ImagePlane icbi(const ImagePlane& p) { return srlab::upscale_icbi(p); }

BENCHMARK(BM_Upscale<nearest>)->Name("upscale/nearest")->Arg(64)->Arg(256);
BENCHMARK(BM_Upscale<bilinear>)->Name("upscale/bilinear")->Arg(64)->Arg(256);
BENCHMARK(BM_Upscale<bicubic>)->Name("upscale/bicubic")->Arg(64)->Arg(256);
BENCHMARK(BM_Upscale<fcbi>)->Name("upscale/fcbi")->Arg(64)->Arg(256);
BENCHMARK(BM_Upscale<icbi>)->Name("upscale/icbi")->Arg(64)->Arg(256);

void BM_UpscaleMlp(benchmark::State& state) {
  const auto size = static_cast<std::size_t>(state.range(0));
  const auto lr = srlab::synthesize("petals", size, size, 1);
  const auto model = srlab::init_model(20, 1);
  for (auto _ : state) benchmark::DoNotOptimize(srlab::upscale_with_mlp(model, lr));
  state.SetItemsProcessed(state.iterations() * 3 * state.range(0) * state.range(0));
}
BENCHMARK(BM_UpscaleMlp)->Name("upscale/mlp_rgb")->Arg(64)->Arg(256);

}  // namespace
