#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "docrep/corpus.hpp"
#include "docrep/forest.hpp"
#include "docrep/netrep.hpp"
#include "docrep/preprocess.hpp"

namespace docrep {

enum class ModelFamily { BowTf, BowTfidf, Word2vec, Doc2vec, Gow };

std::string to_string(ModelFamily family);
ModelFamily parse_model_family(const std::string& name);

struct CorpusConfig {
  std::string name;
  std::filesystem::path path;
  CorpusFormat format = CorpusFormat::Jsonl;
  /// Stratified by default; Predefined reads the records' "split" field.
  SplitMode split_mode = SplitMode::Stratified;
  double train_fraction = 0.8;
};

struct ModelConfig {
  std::string name;
  ModelFamily family = ModelFamily::BowTf;
  /// Embedding dimension (word2vec, doc2vec).
  std::size_t size = 100;
  GowScheme scheme = GowScheme::Average;
  /// Bag-of-words document-frequency threshold.
  std::size_t min_df = 5;
  /// Cumulative explained-variance target of the bag-of-words PCA; 0 disables PCA.
  double variance_target = 0.8;
  /// Embedding epochs; the family default when unset.
  std::optional<std::size_t> epochs;
  /// Doc2vec: train paragraph vectors over train and test text together
  /// instead of inferring test vectors afterwards.
  bool train_on_all_text = false;
};

/// Default model name: bow-tf, bow-tfidf, word2vec-<size>, doc2vec-<size>, gow-<scheme>.
std::string default_model_name(const ModelConfig& model);

/// The sixteen variants: bow-tf, bow-tfidf, word2vec 25/50/75/100,
/// doc2vec 25/50/75/100/200/500/1000, gow average/quartiles/histogram.
std::vector<ModelConfig> standard_models();

struct ExperimentConfig {
  std::vector<CorpusConfig> corpora;
  std::vector<ModelConfig> models;
  ForestParams forest;
  bool tune_mtry = true;
  TuneOptions tuning;
  PreprocessConfig preprocess;
  std::filesystem::path output = "output";
  std::uint64_t seed = 1;
  std::size_t jobs = 1;
  bool deterministic = true;
};

/// YAML (.yaml/.yml) or JSON (.json) by extension. Relative paths are resolved
/// against the config file's directory. The result is validated.
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config_yaml(const std::string& text, const std::filesystem::path& base_dir = {});
ExperimentConfig parse_config_json(const std::string& text, const std::filesystem::path& base_dir = {});

/// Throws InputError on an empty model list ("nothing to run"), duplicate
/// names, missing corpus or stopword paths, or out-of-range parameters.
void validate(const ExperimentConfig& config);

/// Canonical JSON of everything that affects results (not jobs or output).
std::string canonical_json(const ExperimentConfig& config);
/// 16 hex digits of the FNV-1a hash of canonical_json.
std::string config_hash(const ExperimentConfig& config);

}  // namespace docrep
