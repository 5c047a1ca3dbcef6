#include <benchmark/benchmark.h>

#include <map>
#include <memory>

#include "condbayes/engine.hpp"
#include "condbayes/synth.hpp"

using namespace condbayes;

namespace {

// Traces are generated once per (length, vars) cell and reused.
const Trace& corpus_trace(std::size_t length, std::size_t vars) {
  static std::map<std::pair<std::size_t, std::size_t>, std::unique_ptr<Trace>> cache;
  auto& slot = cache[{length, vars}];
  if (!slot) slot = std::make_unique<Trace>(generate(scaling_model(vars), length * 31 + vars, length));
  return *slot;
}

void BM_CountAll(benchmark::State& state) {
  const auto length = static_cast<std::size_t>(state.range(0));
  const auto vars = static_cast<std::size_t>(state.range(1));
  const Trace& trace = corpus_trace(length, vars);
  const CandidateSet set = enumerate_candidates(scaling_spec(vars, 1));
  EngineOptions options;
  options.threads = static_cast<unsigned>(state.range(2));
  for (auto _ : state) {
    TraceSource src(trace);
    benchmark::DoNotOptimize(count_all(set, src, options));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * length));
  state.counters["candidates"] = static_cast<double>(set.candidates.size());
}

void BM_Generate(benchmark::State& state) {
  const auto model = scaling_model(static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(generate(model, 1, static_cast<std::size_t>(state.range(0))));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_CountAll)
    ->ArgsProduct({{25'000, 50'000, 100'000}, {5, 10, 20}, {1}})
    ->ArgsProduct({{100'000}, {20}, {2, 4}})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Generate)->Args({100'000, 20})->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
