#include <random>

#include <benchmark/benchmark.h>

#include "docrep/netrep.hpp"

namespace {

docrep::LanguageNetwork random_network(std::size_t n, std::size_t edges, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  docrep::LanguageNetwork net(n);
  for (std::size_t e = 0; e < edges; ++e) net.add_edge(gen() % n, gen() % n, 1.0);
  return net;
}

void BM_ComputeMeasures(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto net = random_network(n, 3 * n, 1);
  for (auto _ : state) benchmark::DoNotOptimize(docrep::compute_measures(net));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ComputeMeasures)->RangeMultiplier(2)->Range(32, 1024)->Complexity();

void BM_Betweenness(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto net = random_network(n, 3 * n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(docrep::betweenness(net));
}
BENCHMARK(BM_Betweenness)->Arg(128)->Arg(512);

void BM_PageRank(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto net = random_network(n, 4 * n, 3);
  for (auto _ : state) benchmark::DoNotOptimize(docrep::pagerank(net));
}
BENCHMARK(BM_PageRank)->Arg(256)->Arg(2048);

}  // namespace
