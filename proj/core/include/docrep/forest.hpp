#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "docrep/feature_matrix.hpp"

namespace docrep {

struct ForestParams {
  std::size_t n_trees = 500;
  /// Features tried per split; floor(sqrt(n_features)) when unset.
  std::optional<std::size_t> mtry;
  std::size_t min_leaf = 1;
  /// Unlimited when unset.
  std::optional<std::size_t> max_depth;
  std::uint64_t seed = 1;
  /// Worker threads for tree construction; results do not depend on it.
  std::size_t jobs = 1;
};

/// CART tree with axis-aligned splits (x <= threshold goes left).
struct DecisionTree {
  struct Node {
    std::int32_t feature = -1;  // -1 for leaves
    double threshold = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    /// Leaf class histogram of in-bag samples; empty for internal nodes.
    std::vector<std::uint32_t> counts;
    /// Majority class of `counts` (lowest index on ties).
    std::uint32_t prediction = 0;

    bool is_leaf() const { return feature < 0; }
    bool operator==(const Node&) const = default;
  };

  std::vector<Node> nodes;

  const Node& leaf_for(std::span<const double> row) const;
  std::size_t predict(std::span<const double> row) const { return leaf_for(row).prediction; }

  bool operator==(const DecisionTree&) const = default;
};

struct ForestModel {
  std::vector<DecisionTree> trees;
  std::vector<std::string> labels;
  std::size_t n_features = 0;
  std::size_t mtry = 0;
  ForestParams params;
  /// Encoded training labels, row order of the training matrix.
  std::vector<std::uint32_t> train_labels;
  /// n_train × n_classes votes from trees for which the row was out-of-bag.
  std::vector<std::vector<std::uint32_t>> oob_votes;

  bool operator==(const ForestModel& o) const {
    return trees == o.trees && labels == o.labels && n_features == o.n_features && mtry == o.mtry &&
           train_labels == o.train_labels && oob_votes == o.oob_votes;
  }
};

/// Seed of tree `t` of a forest with master seed `seed`.
std::uint64_t tree_seed(std::uint64_t seed, std::size_t t);

/// The bootstrap sample (n draws with replacement) a tree with this seed uses.
std::vector<std::size_t> bootstrap_sample(std::uint64_t tree_seed, std::size_t n);

struct SplitChoice {
  std::size_t feature = 0;
  double threshold = 0.0;
  /// Sample-weighted Gini impurity of the two children.
  double impurity = 0.0;
};

/// Best Gini split over `features` for the given samples (indices into X,
/// repeats allowed). Thresholds are midpoints between consecutive distinct
/// values; ties go to the lower feature index, then the lower threshold.
std::optional<SplitChoice> best_gini_split(const FeatureMatrix& x, std::span<const std::uint32_t> y,
                                           std::size_t n_classes, std::span<const std::size_t> samples,
                                           std::span<const std::size_t> features, std::size_t min_leaf = 1);

/// Bagged CART trees with per-split feature subsampling. Deterministic for a
/// fixed seed regardless of `params.jobs`.
ForestModel train_forest(const FeatureMatrix& x, std::span<const std::string> y, const ForestParams& params);
ForestModel train_forest(const FeatureMatrix& x, std::span<const std::uint32_t> y,
                         std::vector<std::string> labels, const ForestParams& params);

/// Sorted distinct labels and the encoded vector.
std::pair<std::vector<std::string>, std::vector<std::uint32_t>> encode_labels(std::span<const std::string> y);

/// Per-row fraction of trees voting for each class (columns follow model.labels).
std::vector<std::vector<double>> predict_proba(const ForestModel& model, const FeatureMatrix& x);

/// Majority vote; ties go to the label that sorts first.
std::vector<std::string> predict(const ForestModel& model, const FeatureMatrix& x);

/// Misclassification rate of training rows under their out-of-bag votes.
double oob_error(const ForestModel& model);

struct MtryTuning {
  std::size_t best = 1;
  /// (mtry, OOB error) for every value tried, ascending by mtry.
  std::vector<std::pair<std::size_t, double>> tried;
};

struct TuneOptions {
  std::size_t n_trees = 50;
  double step_factor = 2.0;
  double improve = 0.05;
};

/// Step search from floor(sqrt(p)): divide by step_factor while the relative
/// OOB improvement exceeds `improve`, then multiply likewise; returns the mtry
/// with the lowest OOB error among those tried (smallest on ties).
MtryTuning tune_mtry(const FeatureMatrix& x, std::span<const std::string> y, const ForestParams& params,
                     const TuneOptions& opts = {});

std::string to_json(const ForestModel& model);
ForestModel forest_from_json(const std::string& text);

}  // namespace docrep
