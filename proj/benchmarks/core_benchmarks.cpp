#include <benchmark/benchmark.h>

#include "eprbm/epr.hpp"
#include "eprbm/exact.hpp"
#include "eprbm/random.hpp"
#include "eprbm/rbm.hpp"
#include "eprbm/trainer.hpp"

namespace {

using namespace eprbm;

RbmModel random_model(int m, int n, std::uint64_t seed) {
  TrainerConfig config;
  config.seed = seed;
  config.n_hidden = n;
  config.weight_init_scale = 1.0;
  return initial_model(m, config);
}

void BM_Enumerate(benchmark::State& state) {
  const int units = static_cast<int>(state.range(0));
  const RbmModel model = random_model(units / 2, units - units / 2, 1);
  for (auto _ : state) benchmark::DoNotOptimize(enumerate(model).log_partition());
}
BENCHMARK(BM_Enumerate)->DenseRange(8, 20, 4)->Unit(benchmark::kMicrosecond);

void BM_GibbsSweep(benchmark::State& state) {
  const RbmModel model = random_model(4, 4, 2);
  Rng rng(2);
  Configuration c = random_configuration(4, 4, rng);
  for (auto _ : state) {
    gibbs_sweep_inplace(model, c, rng);
    benchmark::DoNotOptimize(c.visible.data());
  }
}
BENCHMARK(BM_GibbsSweep);

void BM_PcdUpdate(benchmark::State& state) {
  const RbmModel model = random_model(4, 4, 3);
  Rng rng(3);
  PersistentChains chains = pcd_init(model, static_cast<int>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(model_expectation_pcd(model, chains, 1, rng));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PcdUpdate)->Arg(100)->Arg(1000);

void BM_DataExpectation(benchmark::State& state) {
  const RbmModel model = random_model(4, 4, 4);
  const Matrix batch = encode_dataset(generate_dataset({}, state.range(0), 4).trials);
  for (auto _ : state) benchmark::DoNotOptimize(data_expectation(model, batch));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DataExpectation)->Arg(100)->Arg(100000);

void BM_GenerateDataset(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(generate_dataset({}, state.range(0), 5));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GenerateDataset)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
