#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace docrep {

struct ConfusionMatrix {
  std::vector<std::string> labels;
  /// counts[true][predicted]
  std::vector<std::vector<std::size_t>> counts;

  std::size_t total() const;
  std::size_t trace() const;
};

ConfusionMatrix confusion_matrix(std::span<const std::string> y_true, std::span<const std::string> y_pred,
                                 std::span<const std::string> labels);

double accuracy(std::span<const std::string> y_true, std::span<const std::string> y_pred);

struct ClassScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  /// Absent when the test set lacks positives or negatives for the class.
  std::optional<double> auroc;
};

/// Precision, recall and F1 per label, each 0 when its denominator is 0.
std::vector<ClassScores> per_class_prf(std::span<const std::string> y_true, std::span<const std::string> y_pred,
                                       std::span<const std::string> labels);

/// One-vs-rest AUROC of `scores` (per-row score for the label) against
/// `positive` flags, as the Mann–Whitney statistic with midranks.
std::optional<double> auroc(std::span<const double> scores, std::span<const bool> positive);

/// AUROC for class `label_index` from per-row class distributions.
std::optional<double> auroc_ovr(std::span<const std::vector<double>> distributions,
                                std::span<const std::string> y_true, std::span<const std::string> labels,
                                std::size_t label_index);

struct EvaluationReport {
  std::string model_name;
  std::string task_name;
  double accuracy = 0.0;
  std::vector<std::string> labels;
  std::vector<ClassScores> per_class;
};

EvaluationReport evaluate(std::string model_name, std::string task_name, std::span<const std::string> y_true,
                          std::span<const std::string> y_pred, std::span<const std::vector<double>> distributions,
                          std::span<const std::string> labels);

std::string to_json(const EvaluationReport& report, const std::string& config_hash = {});
EvaluationReport report_from_json(const std::string& text);
/// One row per class: class,precision,recall,f1,auroc,accuracy (AUROC "NA" when undefined).
std::string to_csv(const EvaluationReport& report, const std::string& config_hash = {});

}  // namespace docrep
