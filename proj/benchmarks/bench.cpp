#include <benchmark/benchmark.h>

#include "ifm/circuits.hpp"
#include "ifm/gate.hpp"
#include "ifm/interferometer.hpp"
#include "ifm/rng.hpp"
#include "ifm/state.hpp"

namespace {

void BM_ExactSweep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ifm::success_probability_exact({n, 0.05}));
  }
}
BENCHMARK(BM_ExactSweep)->Arg(100)->Arg(1000)->Arg(10000);

void BM_IdealGate(benchmark::State& state) {
  for (auto _ : state) {
    ifm::StateVector st = ifm::bell_generation(ifm::IfmGateConfig::ideal());
    benchmark::DoNotOptimize(st);
  }
}
BENCHMARK(BM_IdealGate);

void BM_FiniteGate(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    ifm::StateVector st =
        ifm::bell_generation(ifm::IfmGateConfig::finite(n, 0.05));
    benchmark::DoNotOptimize(st);
  }
}
BENCHMARK(BM_FiniteGate)->Arg(100)->Arg(400);

void BM_BellMeasureTrial(benchmark::State& state) {
  ifm::Rng rng(1);
  for (auto _ : state) {
    ifm::StateVector st = ifm::make_bell(ifm::BellLabel::PsiPlus);
    benchmark::DoNotOptimize(
        ifm::bell_measure(st, 0, 1, ifm::IfmGateConfig::ideal(), rng, 3));
  }
}
BENCHMARK(BM_BellMeasureTrial);

void BM_TeleportedCnotTrial(benchmark::State& state) {
  ifm::Rng rng(1);
  const ifm::StateVector input = ifm::new_state(
      {{ifm::Species::positron, "c"}, {ifm::Species::electron, "t"}}, {0, 0});
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        ifm::gc_cnot(input, ifm::IfmGateConfig::ideal(), rng));
  }
}
BENCHMARK(BM_TeleportedCnotTrial);

}  // namespace

BENCHMARK_MAIN();
