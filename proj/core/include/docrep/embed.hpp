#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "docrep/document.hpp"
#include "docrep/feature_matrix.hpp"

namespace docrep {

enum class EmbeddingMode { Cbow, SkipGram, PvDm };

std::string to_string(EmbeddingMode mode);
EmbeddingMode parse_embedding_mode(const std::string& name);

/// Training settings. Defaults follow the usual word2vec/doc2vec tool
/// defaults (window 5, 5 negatives, learning rate 0.025 decayed linearly to
/// 0.0001, frequent-word downsampling 1e-3, unigram^0.75 noise distribution).
struct EmbeddingParams {
  std::size_t size = 100;
  std::size_t min_count = 1;
  std::size_t window = 5;
  std::size_t negatives = 5;
  std::size_t epochs = 5;
  double learning_rate = 0.025;
  double min_learning_rate = 0.0001;
  double sample = 1e-3;
  double ns_exponent = 0.75;
  std::uint64_t seed = 1;
  EmbeddingMode mode = EmbeddingMode::Cbow;

  /// Doc2vec settings: PV-DM, 20 epochs.
  static EmbeddingParams doc2vec(std::size_t size);
  /// Word2vec settings: CBOW, 5 epochs.
  static EmbeddingParams word2vec(std::size_t size);
};

/// Word vectors plus the output ("context") weights and counts needed to keep
/// training or to infer new documents.
struct WordEmbeddings {
  std::vector<std::string> vocab;
  std::vector<std::uint64_t> counts;
  std::size_t size = 0;
  /// Row-major |vocab| × size input vectors.
  std::vector<double> vectors;
  /// Row-major |vocab| × size output weights for negative sampling.
  std::vector<double> output;
  /// Mean negative-sampling loss per training epoch.
  std::vector<double> epoch_loss;

  std::span<const double> vector(std::size_t i) const { return {vectors.data() + i * size, size}; }
  std::ptrdiff_t index_of(const std::string& word) const;
};

struct DocEmbeddings {
  std::vector<std::string> doc_ids;
  std::size_t size = 0;
  /// Row-major n_docs × size paragraph vectors.
  std::vector<double> vectors;
  WordEmbeddings words;
  EmbeddingParams params;

  std::span<const double> vector(std::size_t i) const { return {vectors.data() + i * size, size}; }
};

/// Loss and gradients of one negative-sampling example:
///   loss = -log σ(u₊·h) - Σₖ log σ(-uₖ·h)
/// `grad_outputs[0]` is for the positive output vector, the rest follow
/// `negatives` in order.
struct NegativeSamplingGradient {
  double loss = 0.0;
  std::vector<double> grad_input;
  std::vector<std::vector<double>> grad_outputs;
};

NegativeSamplingGradient negative_sampling_gradient(
    std::span<const double> input, std::span<const double> positive,
    std::span<const std::span<const double>> negatives);

/// Applies one SGD step of size `alpha` to the output vectors in place and
/// accumulates the input-side update (−alpha × ∂loss/∂input) into `input_update`.
/// Returns the loss before the step. `outputs[0]` is the positive target.
double negative_sampling_step(std::span<const double> input, std::span<const std::span<double>> outputs,
                              double alpha, std::span<double> input_update);

/// CBOW or skip-gram with negative sampling over sentence token streams.
/// Deterministic for a fixed seed.
WordEmbeddings train_word2vec(std::span<const ProcessedDocument> docs, const EmbeddingParams& params);

/// Unweighted mean of the vectors of in-vocabulary stems; zeros if none.
std::vector<double> doc_vector_average(const WordEmbeddings& emb, const ProcessedDocument& doc);

/// PV-DM with averaged context (paragraph vector + window words). Document
/// order is reshuffled every epoch.
DocEmbeddings train_doc2vec(std::span<const ProcessedDocument> docs, const EmbeddingParams& params);

/// Optimizes a fresh paragraph vector for `doc` with word and output weights
/// frozen. The start vector and sampling are seeded from the model seed and
/// the document id. Documents without known words map to the zero vector.
std::vector<double> infer_doc_vector(const DocEmbeddings& model, const ProcessedDocument& doc,
                                     std::size_t epochs);

/// Embedding matrices as FeatureMatrix (rows = terms or doc ids, columns d1..dn).
FeatureMatrix to_feature_matrix(const WordEmbeddings& emb);
FeatureMatrix to_feature_matrix(const DocEmbeddings& emb);
std::string params_json(const EmbeddingParams& params);

}  // namespace docrep
