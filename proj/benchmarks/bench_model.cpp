#include <benchmark/benchmark.h>

#include <vector>

#include "ots/fit.hpp"
#include "ots/sim.hpp"

namespace {

void BM_StaticCurrent(benchmark::State& state) {
  const ots::ModelParams p = ots::table1_params();
  double v = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ots::static_current(v, 0.35, p));
    v = v > 3.0 ? 0.0 : v + 1e-3;
  }
}
BENCHMARK(BM_StaticCurrent);

void BM_SolveVForCurrent(benchmark::State& state) {
  const ots::ModelParams p = ots::table1_params();
  for (auto _ : state)
    benchmark::DoNotOptimize(ots::solve_v_for_current(1e-6, 0.5, 0.0, p, -10.0, 10.0, 1e-6));
}
BENCHMARK(BM_SolveVForCurrent);

void BM_CurrentSweep(benchmark::State& state) {
  const ots::ModelParams p = ots::table1_params();
  ots::SweepSpec s;
  s.start = 1e-12;
  s.stop = 1e7;
  s.points = static_cast<std::size_t>(state.range(0));
  s.spacing = ots::SweepSpacing::Log;
  for (auto _ : state) benchmark::DoNotOptimize(ots::run_sweep(s, p, 0.0));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CurrentSweep)->Arg(400)->Arg(4000);

void BM_FitThreeParams(benchmark::State& state) {
  const ots::ModelParams truth = ots::table1_params();
  std::vector<double> grid;
  for (int k = 0; k < 200; ++k) grid.push_back(0.1 + 2.9 * k / 199.0);
  const ots::IVCurve data = ots::synth_curve(truth, grid, 0.01, 1);
  ots::ModelParams start = truth;
  start.Is = 4e-14;
  start.K = 0.6;
  start.V_T = 0.028;
  ots::FitConfig cfg;
  cfg.free_params = {"Is", "K", "V_T"};
  for (auto _ : state) benchmark::DoNotOptimize(ots::fit(data, cfg, start));
}
BENCHMARK(BM_FitThreeParams)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
