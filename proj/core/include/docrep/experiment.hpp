#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "docrep/document.hpp"
#include "docrep/error.hpp"
#include "docrep/experiment_config.hpp"
#include "docrep/feature_matrix.hpp"

namespace docrep {

/// Failure of one pipeline stage; what() reads "[stage] cause".
class StageError : public Error {
public:
  StageError(std::string stage, const std::string& cause);
  const std::string& stage() const { return stage_; }

private:
  std::string stage_;
};

/// Fits a document representation on training documents and maps any
/// document to a feature row. transform never modifies the fitted state.
class Featurizer {
public:
  Featurizer(ModelConfig model, std::uint64_t seed, std::size_t jobs = 1);
  ~Featurizer();
  Featurizer(Featurizer&&) noexcept;
  Featurizer& operator=(Featurizer&&) noexcept;

  /// `unlabeled` is extra text only used by doc2vec with train_on_all_text.
  void fit(std::span<const ProcessedDocument> train, std::span<const ProcessedDocument> unlabeled = {});
  FeatureMatrix transform(std::span<const ProcessedDocument> docs) const;

  /// JSON of every fitted parameter (vocabulary, idf, PCA, embeddings).
  std::string state_json() const;
  const ModelConfig& model() const { return model_; }

private:
  struct State;
  ModelConfig model_;
  std::uint64_t seed_;
  std::size_t jobs_;
  std::unique_ptr<State> state_;
};

struct StageRecord {
  std::string name;
  double seconds = 0.0;
  /// Paths relative to the run directory.
  std::vector<std::string> artifacts;
};

struct RunManifest {
  std::string config_hash;
  /// output/<config hash>
  std::filesystem::path root;
  std::vector<StageRecord> stages;

  const StageRecord* stage(const std::string& name) const;
};

/// Pipeline stages in order. Each reads the artifacts of the previous ones
/// from the run directory, so they can be invoked separately.
const std::vector<std::string>& stage_names();

/// Runs one stage and records it in the manifest (written to manifest.json).
void run_stage(const ExperimentConfig& config, const std::string& stage, RunManifest& manifest);

/// Opens (or starts) the manifest of the config's run directory.
RunManifest open_run(const ExperimentConfig& config);

/// ingest, featurize, train, evaluate, rank, report.
RunManifest run_experiment(const ExperimentConfig& config);

/// Per-model per-task report CSVs, rank CSVs and plot_data.csv from the
/// evaluation and rank JSON artifacts.
std::vector<std::string> emit_report(const ExperimentConfig& config, const RunManifest& manifest);

std::string to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const std::string& text);

/// Processed-corpus artifact: {"config_hash", "documents": [{id, label, sentences}]}.
std::string processed_json(std::span<const ProcessedDocument> docs, const std::string& config_hash);
std::vector<ProcessedDocument> parse_processed_json(const std::string& text);

}  // namespace docrep
