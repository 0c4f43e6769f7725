#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "docrep/document.hpp"

namespace docrep {

/// Labeled document collection with its sorted set of distinct labels.
class Corpus {
public:
  Corpus() = default;
  /// Validates ids (unique) and labels (non-empty).
  explicit Corpus(std::vector<RawDocument> documents);

  const std::vector<RawDocument>& documents() const { return documents_; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t size() const { return documents_.size(); }

private:
  std::vector<RawDocument> documents_;
  std::vector<std::string> labels_;
};

enum class CorpusFormat { Jsonl, LabeledDirs };

CorpusFormat parse_corpus_format(const std::string& name);

/// Reads a JSON-lines file (objects with id/text/label, optional split) or a
/// directory with one sub-directory per label. Document order follows the file
/// for JSONL and lexicographic path order for directories.
Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format);

struct CorpusStats {
  std::size_t n_docs = 0;
  std::size_t n_distinct_stems = 0;
  std::size_t total_length = 0;
  std::size_t min_len = 0;
  std::size_t max_len = 0;
  double avg_len = 0.0;
  std::map<std::string, std::size_t> label_histogram;
};

/// Lengths are counted in stems of the preprocessed documents.
CorpusStats corpus_stats(const Corpus& corpus, std::span<const ProcessedDocument> processed);

std::string to_json(const CorpusStats& stats);

enum class SplitMode { Predefined, Stratified };

struct SplitSpec {
  SplitMode mode = SplitMode::Stratified;
  double train_fraction = 0.8;
  std::uint64_t seed = 0;
  /// Used verbatim when mode == Predefined.
  std::vector<std::size_t> train_indices;
  std::vector<std::size_t> test_indices;
};

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;

  bool operator==(const Split&) const = default;
};

/// Number of training documents drawn from a class of `class_count` documents:
/// ceil(fraction × count), capped so the class keeps at least one test document.
std::size_t stratified_train_count(std::size_t class_count, double train_fraction);

/// Stratified random split (per-class counts from stratified_train_count,
/// members chosen by a seeded shuffle), or the supplied predefined lists.
/// Returned index lists are sorted ascending.
Split stratified_split(const Corpus& corpus, const SplitSpec& spec);

/// Predefined split from the per-record "split" field of the corpus.
SplitSpec predefined_split_spec(const Corpus& corpus);

/// Split manifest: {"train": [ids], "test": [ids]}.
std::string split_manifest_json(const Corpus& corpus, const Split& split);
Split parse_split_manifest(const Corpus& corpus, const std::string& json);

}  // namespace docrep
