#include <random>

#include <benchmark/benchmark.h>

#include "docrep/pca.hpp"

namespace {

docrep::FeatureMatrix random_matrix(std::size_t n, std::size_t m) {
  std::mt19937_64 gen(3);
  std::normal_distribution<double> z(0, 1);
  std::vector<std::string> ids, cols;
  for (std::size_t i = 0; i < n; ++i) ids.push_back("r" + std::to_string(i));
  for (std::size_t j = 0; j < m; ++j) cols.push_back("c" + std::to_string(j));
  docrep::FeatureMatrix x(ids, cols);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) x.at(i, j) = z(gen) * (1.0 + 5.0 / (1.0 + j));
  return x;
}

// Tall matrices go through the covariance, wide ones through the Gram matrix.
void BM_PcaFit(benchmark::State& state) {
  const auto x = random_matrix(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(docrep::pca_fit(x, 0.8));
}
BENCHMARK(BM_PcaFit)->Args({1000, 100})->Args({400, 2000})->Unit(benchmark::kMillisecond);

}  // namespace
