#include <benchmark/benchmark.h>

#include "srlab/dataset.hpp"
#include "srlab/mlp.hpp"
#include "srlab/random.hpp"
#include "srlab/synth.hpp"

namespace {

void BM_Forward(benchmark::State& state) {
  const auto model = srlab::init_model(static_cast<std::size_t>(state.range(0)), 1);
  srlab::Rng rng(2);
  std::array<double, 9> x{};
  for (double& v : x) v = rng.uniform01();
  srlab::ForwardPass pass;
  for (auto _ : state) {
    srlab::forward_into(model, x, pass);
    benchmark::DoNotOptimize(pass.output.data());
  }
}
BENCHMARK(BM_Forward)->Name("mlp/forward")->Arg(20)->Arg(64);

void BM_Backward(benchmark::State& state) {
  const auto model = srlab::init_model(20, 1);
  const std::array<double, 9> x{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  const std::array<double, 4> t{0.4, 0.5, 0.5, 0.6};
  for (auto _ : state) benchmark::DoNotOptimize(srlab::backward(model, x, t));
}
BENCHMARK(BM_Backward)->Name("mlp/backward");

void BM_TrainEpoch(benchmark::State& state) {
  const auto hr = srlab::synthesize("blocks", 128, 128, 3);
  const auto split = srlab::build_split(srlab::extract_samples(hr, 0), 4);
  srlab::TrainConfig cfg;
  cfg.max_epochs = 1;
  for (auto _ : state) benchmark::DoNotOptimize(srlab::train(srlab::init_model(20, 5), split, cfg));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(split.train.size()));
}
BENCHMARK(BM_TrainEpoch)->Name("mlp/train_epoch_128px")->Unit(benchmark::kMillisecond);

}  // namespace
