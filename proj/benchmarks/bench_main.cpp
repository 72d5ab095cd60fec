#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "heraldmis/engine.hpp"
#include "heraldmis/graph.hpp"
#include "heraldmis/params.hpp"

using namespace heraldmis;

namespace {

// Radius for mean degree 8 in the unit square.
double degree8_radius(int n) { return std::sqrt(8.0 / (3.14159265358979 * (n - 1))); }

}  // namespace

// One full protocol round (intent collection, channel resolution, delivery
// handling) on a random disk graph with mean degree ~8.
static void BM_EngineAdvance(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Graph g = gen_unit_disk(n, degree8_radius(n), 1.0, 7);
  const ProtocolParams p = derive_params(n, 8, 2);
  Engine e(g, p, std::vector<long>(static_cast<std::size_t>(n), 0), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(e.advance());
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_EngineAdvance)->Arg(64)->Arg(256)->Arg(1024);

// Pure channel resolution on a fixed intent set: every node broadcasts or
// listens on one of a handful of report channels.
static void BM_ResolveRound(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Graph g = gen_unit_disk(n, degree8_radius(n), 1.0, 7);
  std::vector<Intent> intents;
  intents.reserve(static_cast<std::size_t>(n));
  for (NodeId v = 0; v < n; ++v) {
    const ChannelId ch{ChannelClass::Report, 1 + v % 4};
    if (v % 3 == 0) {
      intents.push_back(Intent::broadcast(v, ch, Message{v, State::M, MsgKind::Mis}));
    } else {
      intents.push_back(Intent::listen(v, ch));
    }
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(resolve_round(g, intents));
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_ResolveRound)->Arg(64)->Arg(256)->Arg(1024);

// Exact independence number by branch and bound at the brute-force cap.
static void BM_ExactIndependentSet(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Graph g = gen_unit_disk(n, 0.3, 1.0, 11);
  std::vector<NodeId> all(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
  for (auto _ : state) {
    benchmark::DoNotOptimize(max_independent_set_size(g, all, n));
  }
}
BENCHMARK(BM_ExactIndependentSet)->Arg(16)->Arg(20)->Arg(24);

BENCHMARK_MAIN();
