#include "docrep/bow.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "docrep/error.hpp"

namespace docrep {

std::ptrdiff_t Vocabulary::index_of(const std::string& term) const {
  auto it = std::lower_bound(terms.begin(), terms.end(), term);
  return it != terms.end() && *it == term ? it - terms.begin() : -1;
}

Vocabulary build_vocabulary(std::span<const ProcessedDocument> docs, std::size_t min_df) {
  std::map<std::string, std::size_t> df;
  for (const auto& d : docs) {
    std::unordered_set<std::string_view> seen;
    for (const auto& s : d.sentences) {
      for (const auto& w : s) {
        if (seen.insert(w).second) ++df[w];
      }
    }
  }
  Vocabulary v;
  v.n_docs = docs.size();
  for (const auto& [term, count] : df) {
    if (count >= min_df) {
      v.terms.push_back(term);
      v.doc_freq.emplace(term, count);
    }
  }
  if (v.terms.empty()) {
    throw InputError("vocabulary is empty after document-frequency thresholding (min_df = " +
                     std::to_string(min_df) + "); lower min_df");
  }
  return v;
}

FeatureMatrix tf_matrix(std::span<const ProcessedDocument> docs, const Vocabulary& vocab) {
  std::vector<std::string> ids;
  ids.reserve(docs.size());
  for (const auto& d : docs) ids.push_back(d.id);
  FeatureMatrix m(std::move(ids), vocab.terms);
  std::unordered_map<std::string_view, std::size_t> column;
  for (std::size_t c = 0; c < vocab.terms.size(); ++c) column.emplace(vocab.terms[c], c);
  for (std::size_t r = 0; r < docs.size(); ++r) {
    for (const auto& s : docs[r].sentences) {
      for (const auto& w : s) {
        if (auto it = column.find(w); it != column.end()) m.at(r, it->second) += 1.0;
      }
    }
  }
  return m;
}

double smooth_idf(std::size_t doc_freq, std::size_t n_docs) {
  return std::log((1.0 + static_cast<double>(n_docs)) / (1.0 + static_cast<double>(doc_freq))) + 1.0;
}

FeatureMatrix tfidf_matrix(std::span<const ProcessedDocument> docs, const Vocabulary& vocab,
                           const std::map<std::string, std::size_t>& train_doc_freq,
                           std::size_t n_train) {
  auto m = tf_matrix(docs, vocab);
  std::vector<double> idf(vocab.terms.size());
  for (std::size_t c = 0; c < idf.size(); ++c) {
    auto it = train_doc_freq.find(vocab.terms[c]);
    const std::size_t df = it == train_doc_freq.end() ? 0 : it->second;
    idf[c] = smooth_idf(df, n_train);
  }
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto row = m.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) row[c] *= idf[c];
  }
  return m;
}

FeatureMatrix tfidf_matrix(std::span<const ProcessedDocument> docs, const Vocabulary& vocab) {
  return tfidf_matrix(docs, vocab, vocab.doc_freq, vocab.n_docs);
}

std::string to_json(const Vocabulary& vocab) {
  nlohmann::json j = {{"n_docs", vocab.n_docs}, {"terms", vocab.terms}, {"doc_freq", vocab.doc_freq}};
  return j.dump();
}

}  // namespace docrep
