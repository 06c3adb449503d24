#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "qcalc/bell.hpp"
#include "qcalc/calculus.hpp"
#include "qcalc/criteria.hpp"
#include "qcalc/random.hpp"
#include "qcalc/scenarios.hpp"

using namespace qcalc;

namespace {

FactorSpace three_factors(std::size_t d) { return FactorSpace{{"a", d}, {"b", d}, {"c", d}}; }

void BM_PartialTrace(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  Rng rng(1);
  const Operator rho = random_density(three_factors(d), rng);
  const std::vector<std::string> labels = {"b"};
  for (auto _ : state) benchmark::DoNotOptimize(partial_trace(rho, labels));
}
BENCHMARK(BM_PartialTrace)->Arg(2)->Arg(3)->Arg(4);

void BM_FirstDivision(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  Rng rng(2);
  const Operator rho = random_density(three_factors(d), rng);
  const Operator e = random_effect(FactorSpace{{"a", d}}, rng);
  for (auto _ : state) benchmark::DoNotOptimize(kernel::first_division(rho, e));
}
BENCHMARK(BM_FirstDivision)->Arg(2)->Arg(3)->Arg(4);

void BM_SecondDivision(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  Rng rng(3);
  const Operator e = random_effect(three_factors(d), rng);
  const Operator q = random_density(FactorSpace{{"c", d}}, rng);
  for (auto _ : state) benchmark::DoNotOptimize(kernel::second_division(e, q));
}
BENCHMARK(BM_SecondDivision)->Arg(2)->Arg(3)->Arg(4);

void BM_TransparencyChain(benchmark::State& state) {
  const auto s = lab::build_scenario("pointer_nondisturbing", static_cast<std::size_t>(state.range(0)), 42);
  for (auto _ : state)
    benchmark::DoNotOptimize(lab::chain_transparency(s.examinee, s.inst, s.primitive, lab::Thresholds{}));
}
BENCHMARK(BM_TransparencyChain)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_TailLog10(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(bell::tail_log10(n, 0.85, 0.84, 0.86));
}
BENCHMARK(BM_TailLog10)->Arg(1000)->Arg(1'000'000)->Arg(10'000'000)->Unit(benchmark::kMillisecond);

void BM_SamplePair(benchmark::State& state) {
  const auto cfg = bell::AnalyzerConfig::from_degrees(0, 90, 45, -45);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(bell::sample_pair(cfg, bell::Pair::AJ, n, 7));
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) * state.range(0));
}
BENCHMARK(BM_SamplePair)->Arg(100'000)->Arg(1'000'000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
