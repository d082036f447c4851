// Serial reference vs OpenMP path for the per-node kernels.
#include <benchmark/benchmark.h>

#include "sobnet/constructions.hpp"
#include "sobnet/rates.hpp"
#include "sobnet/sobolev.hpp"
#include "sobnet/training.hpp"

using namespace sobnet;

namespace {

Exec exec_of(const benchmark::State& state) {
  return state.range(0) == 0 ? Exec::serial : Exec::parallel;
}

void BM_SobolevError2d(benchmark::State& state) {
  const Activation act(ActivationKind::sigmoid);
  const auto proj = projection_net(act, 2, 3, 0, 5.0, 2, 2.0, 0.5, Resolution{10, 3});
  const auto grid = make_grid(Box{5.0, 2}, Resolution{60, 5});
  const auto f = network_jets(proj.net, act);
  const auto g = projection_target(0).jets;
  for (auto _ : state) benchmark::DoNotOptimize(sobolev_error(f, g, 2, 2.0, grid, exec_of(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(grid.size()));
}

void BM_RateCheck(benchmark::State& state) {
  const Activation act(ActivationKind::softsign);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        verify_rate(act, kInf, {-5, 5}, {1, 10, 100, 1000}, Resolution{2000, 5}, exec_of(state)));
  }
}

void BM_Experiment(benchmark::State& state) {
  TrainConfig c = preset_config("elu-pwl");
  c.trials = 8;
  c.epochs = 50;
  c.seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(run_experiment(c, exec_of(state)));
}

}  // namespace

BENCHMARK(BM_SobolevError2d)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RateCheck)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Experiment)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
