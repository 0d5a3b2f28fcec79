#include <benchmark/benchmark.h>

#include "mafl/channel.hpp"
#include "mafl/metrics.hpp"
#include "mafl/rng.hpp"
#include "mafl/sim.hpp"
#include "mafl/staleness.hpp"
#include "mafl/trainer.hpp"

using namespace mafl;

namespace {

SimConfig base_config() { return parse_config(""); }

void BM_tx_rate(benchmark::State& state) {
  SimConfig cfg = base_config();
  double d = 42.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(tx_rate(cfg, 0.8, d));
    d += 1e-9;  // defeat hoisting
  }
}
BENCHMARK(BM_tx_rate);

void BM_fading_advance(benchmark::State& state) {
  SimConfig cfg = base_config();
  long slot = 0;
  FadingState fading(cfg.rng_seed, 1, cfg.fading_rho);
  for (auto _ : state) {
    fading.advance_to_slot(++slot);
    benchmark::DoNotOptimize(fading.gain());
  }
}
BENCHMARK(BM_fading_advance);

void BM_sgd_step(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Dataset data = synth_dataset(7, static_cast<std::size_t>(n), 10, 784);
  DatasetView view = view_all(data);
  TrainerModel model = init_model(ModelKind::softmax_regression, 784, 10, 0, 1);
  for (auto _ : state) {
    model = sgd_step(model, view, 0.01);
    benchmark::DoNotOptimize(model.params.values.data());
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_sgd_step)->Arg(256)->Arg(2048);

void BM_evaluate(benchmark::State& state) {
  Dataset data = synth_dataset(9, 2048, 10, 784);
  DatasetView view = view_all(data);
  TrainerModel model = init_model(ModelKind::softmax_regression, 784, 10, 0, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate(model, view));
  }
  state.SetItemsProcessed(state.iterations() * 2048);
}
BENCHMARK(BM_evaluate);

void BM_simulation_round(benchmark::State& state) {
  SimConfig cfg = base_config();
  cfg.num_vehicles = 3;
  cfg.num_rounds = static_cast<int>(state.range(0));
  Dataset train = synth_dataset(100, 400, 10, 12);
  Dataset test = synth_dataset(101, 80, 10, 12);
  std::vector<VehicleProfile> profiles;
  DataBundle data;
  data.test = &test;
  for (int i = 1; i <= 3; ++i) {
    VehicleProfile p;
    p.vehicle_id = i;
    p.data_count = 40;
    p.cpu_freq = 4e6;
    Rng rng(derive_seed(cfg.rng_seed, "initial-position", i));
    p.initial_x =
        rng.uniform(-cfg.coverage_half_width, cfg.coverage_half_width);
    profiles.push_back(p);
    DatasetView shard;
    shard.base = &train;
    for (int s = 0; s < 40; ++s)
      shard.indices.push_back(static_cast<std::uint32_t>((i * 37 + s) % 400));
    data.shards.push_back(std::move(shard));
  }
  for (auto _ : state) {
    SimResult r = run_simulation(cfg, profiles, data);
    benchmark::DoNotOptimize(r.records.data());
  }
  state.SetItemsProcessed(state.iterations() * cfg.num_rounds);
}
BENCHMARK(BM_simulation_round)->Arg(10)->Arg(50);

}  // namespace

BENCHMARK_MAIN();
