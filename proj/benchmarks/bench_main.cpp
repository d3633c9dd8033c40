// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "chaintrick/hopf.hpp"
#include "chaintrick/simulator.hpp"
#include "chaintrick/sweep.hpp"

using namespace chaintrick;

static void BM_Equilibrium(benchmark::State& state) {
  const MacroParams p;
  const InvestmentParams inv;
  for (auto _ : state) benchmark::DoNotOptimize(equilibrium(p, inv));
}
BENCHMARK(BM_Equilibrium);

static void BM_AssessStability(benchmark::State& state) {
  MacroParams p;
  p.m = static_cast<int>(state.range(0));
  const InvestmentParams inv;
  for (auto _ : state) benchmark::DoNotOptimize(assess_stability(p, inv));
}
BENCHMARK(BM_AssessStability)->Arg(1)->Arg(2)->Arg(4);

static void BM_HopfInT(benchmark::State& state) {
  MacroParams p;
  p.alpha = 0.6;
  p.m = static_cast<int>(state.range(0));
  const InvestmentParams inv;
  for (auto _ : state) benchmark::DoNotOptimize(hopf_in_T(p, inv));
}
BENCHMARK(BM_HopfInT)->Arg(1)->Arg(2)->Arg(3);

static void BM_HopfInG(benchmark::State& state) {
  const MacroParams p;
  const InvestmentParams inv;
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(hopf_in_g(p, inv, m));
}
BENCHMARK(BM_HopfInG)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_Integrate(benchmark::State& state) {
  MacroParams p;
  p.alpha = 0.9;
  p.T = 3.0;
  p.m = static_cast<int>(state.range(0));
  const InvestmentParams inv;
  const auto sys = ChainSystem::build(p, inv);
  const auto s0 = ChainState::from_history(p.m, 15.0, 100.0);
  for (auto _ : state) benchmark::DoNotOptimize(integrate(sys, s0, 3000.0));
}
BENCHMARK(BM_Integrate)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

static void BM_CurveTvsAlpha(benchmark::State& state) {
  const MacroParams p;
  const InvestmentParams inv;
  const Axis axis{BifurcationParameter::alpha, 0.6, 0.764, 30};
  SweepOptions opt;
  opt.threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(curve_T_vs_alpha(p, inv, axis, opt));
}
BENCHMARK(BM_CurveTvsAlpha)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
