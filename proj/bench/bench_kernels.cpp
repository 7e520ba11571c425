// Serial reference vs OpenMP path of the batch kernels.
// Threads: FPSA_SNN_THREADS or the OpenMP default.

#include <benchmark/benchmark.h>

#include "fpsa/characterize.hpp"
#include "fpsa/presets.hpp"
#include "fpsa/repro.hpp"

using namespace fpsa;

namespace {

Execution policy(const benchmark::State& st) { return st.range(0) == 0 ? Execution::serial : Execution::parallel; }

const char* label(const benchmark::State& st) { return st.range(0) == 0 ? "serial" : "parallel"; }

WeightMatrix letter_weights() {
  static const WeightMatrix w = [] {
    const auto sim = default_sim(Task::xdu);
    return train(task_patterns(Task::xdu), TargetSpec::one_hot(3), default_learning(), sim).weights;
  }();
  return w;
}

void BM_Evaluate(benchmark::State& st) {
  auto sim = default_sim(Task::xdu);
  sim.execution = policy(st);
  const auto pats = task_patterns(Task::xdu);
  const auto w = letter_weights();
  for (auto _ : st) benchmark::DoNotOptimize(evaluate(pats, {0, 1, 2}, w, sim, default_cascade()));
  st.SetLabel(label(st));
}

void BM_Repro(benchmark::State& st) {
  auto sim = default_sim(Task::xdu);
  sim.execution = policy(st);
  const auto pats = task_patterns(Task::xdu);
  const auto w = letter_weights();
  ReproConfig cfg;
  cfg.trials = 16;
  cfg.jitter = default_jitter();
  for (auto _ : st) benchmark::DoNotOptimize(run_repro(pats, w, sim, cfg));
  st.SetLabel(label(st));
}

void BM_PiCurve(benchmark::State& st) {
  ProbeConfig cfg;
  cfg.execution = policy(st);
  std::vector<double> grid;
  for (int k = 0; k < 16; ++k) grid.push_back(1.0e-3 + 0.2e-3 * k);
  const auto p = neuron1().params;
  for (auto _ : st) benchmark::DoNotOptimize(pi_curve(p, grid, cfg));
  st.SetLabel(label(st));
}

}  // namespace

BENCHMARK(BM_Evaluate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Repro)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_PiCurve)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
