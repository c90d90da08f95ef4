#include <benchmark/benchmark.h>

#include <memory>

#include "valid/broadcast.hpp"
#include "valid/field.hpp"
#include "valid/graph.hpp"
#include "valid/learning.hpp"
#include "valid/poly_hash.hpp"
#include "valid/rng.hpp"
#include "valid/validation.hpp"

namespace {

using namespace valid;

void BM_PolyHash(benchmark::State& state) {
  const PrimeField field;
  std::vector<int64_t> xi(static_cast<size_t>(state.range(0)));
  CounterRng rng(1);
  for (auto& x : xi) x = static_cast<int64_t>(rng());
  const uint64_t key = rng() % kMersenne61;
  for (auto _ : state) benchmark::DoNotOptimize(poly_hash(field, key, xi));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PolyHash)->Arg(2000)->Arg(20000);

void BM_LearningTwoClique(benchmark::State& state) {
  const Graph g = two_clique_bridge(1);
  std::vector<std::vector<double>> means;
  for (AgentId v = 0; v < g.size(); ++v) means.push_back({v < 10 ? 1.5 : -0.5, 0.5});
  auto loss = std::make_shared<const LossModel>(LossModel::quadratic(means, 0.5));
  std::vector<AgentDataSource> sources;
  for (AgentId v = 0; v < g.size(); ++v) sources.emplace_back(v, loss, 10, 1);
  const StepSchedule s{0.3, 0.1, static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(run_learning(g, sources, s));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LearningTwoClique)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_Broadcast(benchmark::State& state) {
  const Graph g = two_clique_bridge(1);
  auto msg = std::make_shared<const Payload>(Payload(static_cast<size_t>(state.range(0)), 7));
  for (auto _ : state) benchmark::DoNotOptimize(validated_broadcast(g, 0, msg, {}));
}
BENCHMARK(BM_Broadcast)->Arg(4)->Arg(400);

void BM_StateAgreement(benchmark::State& state) {
  const Graph g = two_clique_bridge(1);
  ValidationStates init(g.size());
  init[3].raise(Cause::kBoundViolation);
  for (auto _ : state) benchmark::DoNotOptimize(state_agreement(g, init));
}
BENCHMARK(BM_StateAgreement);

}  // namespace
BENCHMARK_MAIN();
