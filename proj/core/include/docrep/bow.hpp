#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "docrep/document.hpp"
#include "docrep/feature_matrix.hpp"

namespace docrep {

/// Training-set vocabulary after document-frequency thresholding.
struct Vocabulary {
  /// Lexicographically sorted; defines the column order of tf/tf-idf matrices.
  std::vector<std::string> terms;
  /// Document frequency in the training set, for kept terms.
  std::map<std::string, std::size_t> doc_freq;
  /// Number of training documents the frequencies were counted on.
  std::size_t n_docs = 0;

  /// Column of `term`, or -1 when out of vocabulary.
  std::ptrdiff_t index_of(const std::string& term) const;

  bool operator==(const Vocabulary&) const = default;
};

/// Keeps terms occurring in at least `min_df` distinct documents.
Vocabulary build_vocabulary(std::span<const ProcessedDocument> docs, std::size_t min_df = 5);

/// Raw term counts; out-of-vocabulary stems are ignored.
FeatureMatrix tf_matrix(std::span<const ProcessedDocument> docs, const Vocabulary& vocab);

/// Smoothed inverse document frequency: ln((1 + n) / (1 + df)) + 1.
double smooth_idf(std::size_t doc_freq, std::size_t n_docs);

/// tf × smooth_idf, with df and n taken from the training statistics. Rows are
/// not length-normalized.
FeatureMatrix tfidf_matrix(std::span<const ProcessedDocument> docs, const Vocabulary& vocab,
                           const std::map<std::string, std::size_t>& train_doc_freq,
                           std::size_t n_train);
FeatureMatrix tfidf_matrix(std::span<const ProcessedDocument> docs, const Vocabulary& vocab);

std::string to_json(const Vocabulary& vocab);

}  // namespace docrep
