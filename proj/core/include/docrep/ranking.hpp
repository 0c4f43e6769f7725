#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "docrep/metrics.hpp"

namespace docrep {

/// A model's performance vector; larger is better in every coordinate.
struct MetricPoint {
  std::string model_name;
  std::vector<double> values;
};

/// a ≥ b everywhere and a > b somewhere. Throws on dimension mismatch.
bool dominates(std::span<const double> a, std::span<const double> b);
bool dominates(const MetricPoint& a, const MetricPoint& b);

using Fronts = std::vector<std::vector<std::size_t>>;

/// Non-dominated sorting: front 1 holds the points no other point dominates,
/// front k those left undominated once fronts 1..k−1 are removed. Indices in
/// each front are ascending.
Fronts pareto_fronts(std::span<const MetricPoint> points);
Fronts pareto_fronts(std::span<const std::vector<double>> points);

/// Members of a front share the mean of the positions the front occupies.
std::vector<double> fractional_ranks(const Fronts& fronts, std::size_t n);

enum class RankMetric { Accuracy, Precision, Recall, F1, Auroc };

std::string to_string(RankMetric metric);
RankMetric parse_rank_metric(const std::string& name);
const std::vector<RankMetric>& all_rank_metrics();

struct RankTable {
  RankMetric metric = RankMetric::Accuracy;
  /// Column order (first appearance in the reports).
  std::vector<std::string> tasks;
  /// Row order (first appearance in the reports).
  std::vector<std::string> models;
  std::map<std::string, std::map<std::string, double>> per_task;
  std::map<std::string, double> average_rank;
};

/// Ranks models per task by non-dominated sorting of their per-class metric
/// vectors (a scalar for accuracy) and averages ranks over tasks. Classes
/// whose AUROC is undefined for any model of a task are dropped for that task.
RankTable rank_models(std::span<const EvaluationReport> reports, RankMetric metric);

/// Rows = models, columns = tasks then "Avg. rank".
std::string to_csv(const RankTable& table, const std::string& config_hash = {});
std::string to_json(const RankTable& table, const std::string& config_hash = {});

}  // namespace docrep
