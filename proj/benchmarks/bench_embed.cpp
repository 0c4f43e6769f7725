#include <random>

#include <benchmark/benchmark.h>

#include "docrep/embed.hpp"

namespace {

std::vector<docrep::ProcessedDocument> corpus(std::size_t docs) {
  std::mt19937_64 gen(5);
  std::vector<docrep::ProcessedDocument> out;
  for (std::size_t d = 0; d < docs; ++d) {
    docrep::ProcessedDocument doc{"d" + std::to_string(d), "L", {}};
    for (int s = 0; s < 10; ++s) {
      docrep::Sentence sent;
      for (int w = 0; w < 12; ++w) sent.push_back("w" + std::to_string(gen() % 2000));
      doc.sentences.push_back(sent);
    }
    out.push_back(doc);
  }
  return out;
}

void BM_Word2vec(benchmark::State& state) {
  const auto docs = corpus(200);
  auto p = docrep::EmbeddingParams::word2vec(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(docrep::train_word2vec(docs, p));
  state.SetItemsProcessed(state.iterations() * 200 * 120 * static_cast<std::int64_t>(p.epochs));
}
BENCHMARK(BM_Word2vec)->Arg(25)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_Doc2vec(benchmark::State& state) {
  const auto docs = corpus(200);
  auto p = docrep::EmbeddingParams::doc2vec(static_cast<std::size_t>(state.range(0)));
  p.epochs = 5;
  for (auto _ : state) benchmark::DoNotOptimize(docrep::train_doc2vec(docs, p));
}
BENCHMARK(BM_Doc2vec)->Arg(25)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace
