#include <benchmark/benchmark.h>

#include <random>

#include "brp/adversaries.h"
#include "brp/crep.h"
#include "brp/engine.h"
#include "brp/greedy.h"
#include "brp/offline.h"

using namespace brp;

namespace {

// Dense graph of `count` singletons with weights just under the merge line,
// so the searches have to look at most subsets.
crep::SubsetGraph dense_graph(std::size_t count, Cost alpha) {
  std::mt19937_64 rng(count);
  crep::SubsetGraph g;
  g.weight.assign(count, std::vector<Cost>(count, 0));
  for (std::size_t i = 0; i < count; ++i) {
    g.ids.push_back(static_cast<crep::ComponentId>(i));
    g.volume.push_back(1);
    for (std::size_t j = 0; j < i; ++j) {
      g.weight[i][j] = g.weight[j][i] = static_cast<Cost>(rng() % alpha);
    }
  }
  return g;
}

void BM_FindMergeSet(benchmark::State &state) {
  const auto count = static_cast<std::size_t>(state.range(0));
  const auto g = dense_graph(count, 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(crep::find_merge_set(g, static_cast<int>(count / 2), 4));
  }
}
BENCHMARK(BM_FindMergeSet)->DenseRange(4, 16, 4);

void BM_FindEpochSet(benchmark::State &state) {
  const auto count = static_cast<std::size_t>(state.range(0));
  const auto g = dense_graph(count, 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(crep::find_epoch_set(g, static_cast<int>(count / 2), 4));
  }
}
BENCHMARK(BM_FindEpochSet)->DenseRange(4, 16, 4);

template <class Algorithm>
void run_random(benchmark::State &state, const Params &p, const Configuration &start, Algorithm make) {
  const auto steps = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) {
    auto algorithm = make();
    adversary::RandomPairs source(7, p.n, steps);
    benchmark::DoNotOptimize(run(algorithm, source, p, start, steps).ledger.total());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * steps));
}

void BM_CrepSteps(benchmark::State &state) {
  const int k = static_cast<int>(state.range(0));
  const Params p{4 * k, k, 4, 2, 4};
  const auto initial = Configuration::contiguous(p);
  run_random(state, p, crep::Crep::online_initial(p, initial), [&] { return crep::Crep(p, initial); });
}
BENCHMARK(BM_CrepSteps)->Args({2, 10000})->Args({3, 2000})->Args({4, 2000})->Unit(benchmark::kMillisecond);

void BM_GreedySteps(benchmark::State &state) {
  const Params p = Params::make(2, static_cast<int>(state.range(0)), 2);
  run_random(state, p, Configuration::contiguous(p), [&] { return Greedy(p, 3); });
}
BENCHMARK(BM_GreedySteps)->Args({4, 10000})->Args({16, 10000});

void BM_OptimalCost(benchmark::State &state) {
  const Params p = Params::make(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)), 1);
  const auto initial = Configuration::contiguous(p);
  adversary::RandomPairs source(3, p.n, 200);
  std::vector<Request> sigma;
  while (auto r = source.next(initial)) {
    sigma.push_back(*r);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(offline::optimal_cost(sigma, p, initial).cost);
  }
  state.counters["partitions"] = static_cast<double>(offline::partition_count(p.n, p.k, p.l));
}
BENCHMARK(BM_OptimalCost)->Args({2, 3})->Args({3, 2})->Args({2, 4})->Args({3, 3});

} // namespace

BENCHMARK_MAIN();
