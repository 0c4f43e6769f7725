#include <random>

#include <benchmark/benchmark.h>

#include "docrep/forest.hpp"

namespace {

std::pair<docrep::FeatureMatrix, std::vector<std::string>> data(std::size_t n, std::size_t p) {
  std::mt19937_64 gen(7);
  std::normal_distribution<double> z(0, 1);
  std::vector<std::string> ids, cols;
  for (std::size_t i = 0; i < n; ++i) ids.push_back("r" + std::to_string(i));
  for (std::size_t j = 0; j < p; ++j) cols.push_back("f" + std::to_string(j));
  docrep::FeatureMatrix x(ids, cols);
  std::vector<std::string> y;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p; ++j) x.at(i, j) = z(gen) + (i % 2 && j < 3 ? 1.0 : 0.0);
    y.push_back(i % 2 ? "b" : "a");
  }
  return {x, y};
}

void BM_TrainForest(benchmark::State& state) {
  const auto [x, y] = data(static_cast<std::size_t>(state.range(0)), 50);
  docrep::ForestParams p;
  p.n_trees = 100;
  for (auto _ : state) benchmark::DoNotOptimize(docrep::train_forest(x, y, p));
}
BENCHMARK(BM_TrainForest)->Arg(200)->Arg(800)->Unit(benchmark::kMillisecond);

void BM_PredictProba(benchmark::State& state) {
  const auto [x, y] = data(800, 50);
  docrep::ForestParams p;
  p.n_trees = 100;
  const auto model = docrep::train_forest(x, y, p);
  for (auto _ : state) benchmark::DoNotOptimize(docrep::predict_proba(model, x));
}
BENCHMARK(BM_PredictProba)->Unit(benchmark::kMillisecond);

}  // namespace
