// Serial reference versus OpenMP trial scheduling on a gamma sweep, plus the
// per-iteration kernels that dominate a single solve.

#include <random>

#include <benchmark/benchmark.h>

#include "jtrx/experiment.hpp"

using namespace jtrx;

namespace {

ExperimentSpec sweep_spec(int K, Execution execution) {
  ExperimentSpec spec;
  spec.kind = ExperimentKind::SweepGamma;
  spec.base = make_uniform_config(8, K, 2, 2, 0.0, 5.0);
  spec.options = SolveOptions::from(spec.base);
  spec.sweep = {0.0, 10.0};
  spec.trials = 8;
  spec.execution = execution;
  return spec;
}

void BM_SweepGamma(benchmark::State& state, Execution execution) {
  const ExperimentSpec spec = sweep_spec(static_cast<int>(state.range(0)), execution);
  for (auto _ : state) benchmark::DoNotOptimize(run_sweep_gamma(spec));
  state.SetItemsProcessed(state.iterations() * spec.trials * static_cast<long>(spec.sweep.size()));
}
BENCHMARK_CAPTURE(BM_SweepGamma, serial, Execution::Serial)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_CAPTURE(BM_SweepGamma, parallel, Execution::Parallel)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_GenEigvec(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  std::mt19937_64 g(1);
  std::normal_distribution<double> nd;
  CMatrix Z(n, n), W(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      Z(i, j) = cd(nd(g), nd(g));
      W(i, j) = cd(nd(g), nd(g));
    }
  const numerics::HermitianPair pair{Z * Z.adjoint(), CMatrix::Identity(n, n) + W * W.adjoint()};
  for (auto _ : state) benchmark::DoNotOptimize(numerics::dominant_gen_eigvec(pair));
}
BENCHMARK(BM_GenEigvec)->Arg(2)->Arg(8)->Arg(32);

void BM_FilterUpdates(benchmark::State& state) {
  const SystemConfig c = make_uniform_config(8, static_cast<int>(state.range(0)), 2, 2, 10.0, 5.0);
  const ChannelSet ch = draw_channels(c, 1);
  BeamformerState s = init_state(c, 1);
  s.lambda.setOnes();
  for (auto _ : state) {
    BeamformerState a = update_receive_filters(s, ch, c);
    benchmark::DoNotOptimize(update_transmit_filters(a, ch, c));
  }
}
BENCHMARK(BM_FilterUpdates)->Arg(2)->Arg(4)->Arg(8);

void BM_ConstraintSolve(benchmark::State& state) {
  const SystemConfig c = make_uniform_config(8, static_cast<int>(state.range(0)), 2, 2, -5.0, 5.0);
  const ChannelSet ch = draw_channels(c, 1);
  BeamformerState s = update_receive_filters(init_state(c, 1), ch, c);
  for (auto _ : state) {
    const ConstraintSystem sys = constraint_system(s, ch, c);
    benchmark::DoNotOptimize(downlink_powers(sys));
  }
}
BENCHMARK(BM_ConstraintSolve)->Arg(2)->Arg(4)->Arg(8);

}  // namespace

BENCHMARK_MAIN();
