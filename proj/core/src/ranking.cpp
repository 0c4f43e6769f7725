#include "docrep/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "docrep/error.hpp"
#include "docrep/feature_matrix.hpp"

namespace docrep {

bool dominates(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw InputError("dominates: dimension mismatch (" + std::to_string(a.size()) + " vs " +
                     std::to_string(b.size()) + ")");
  }
  bool strict = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return false;
    if (a[i] > b[i]) strict = true;
  }
  return strict;
}

bool dominates(const MetricPoint& a, const MetricPoint& b) { return dominates(a.values, b.values); }

Fronts pareto_fronts(std::span<const std::vector<double>> points) {
  const auto n = points.size();
  std::vector<std::size_t> dominated_by(n, 0);
  std::vector<std::vector<std::size_t>> dominated(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (dominates(points[i], points[j])) {
        dominated[i].push_back(j);
        ++dominated_by[j];
      } else if (dominates(points[j], points[i])) {
        dominated[j].push_back(i);
        ++dominated_by[i];
      }
    }
  }
  Fronts fronts;
  std::vector<std::size_t> current;
  for (std::size_t i = 0; i < n; ++i)
    if (dominated_by[i] == 0) current.push_back(i);
  while (!current.empty()) {
    std::vector<std::size_t> next;
    for (auto i : current) {
      for (auto j : dominated[i]) {
        if (--dominated_by[j] == 0) next.push_back(j);
      }
    }
    std::sort(next.begin(), next.end());
    fronts.push_back(std::move(current));
    current = std::move(next);
  }
  return fronts;
}

Fronts pareto_fronts(std::span<const MetricPoint> points) {
  std::vector<std::vector<double>> values;
  values.reserve(points.size());
  for (const auto& p : points) values.push_back(p.values);
  return pareto_fronts(values);
}

std::vector<double> fractional_ranks(const Fronts& fronts, std::size_t n) {
  std::vector<double> ranks(n, 0.0);
  std::vector<bool> seen(n, false);
  std::size_t start = 1;
  for (const auto& f : fronts) {
    const double r = (static_cast<double>(start) + static_cast<double>(start + f.size() - 1)) / 2.0;
    for (auto i : f) {
      if (i >= n) throw InputError("fractional_ranks: index out of range");
      if (seen[i]) throw InputError("fractional_ranks: index " + std::to_string(i) + " appears twice");
      seen[i] = true;
      ranks[i] = r;
    }
    start += f.size();
  }
  if (start != n + 1) throw InputError("fractional_ranks: fronts do not partition the models");
  return ranks;
}

std::string to_string(RankMetric metric) {
  switch (metric) {
    case RankMetric::Accuracy: return "accuracy";
    case RankMetric::Precision: return "precision";
    case RankMetric::Recall: return "recall";
    case RankMetric::F1: return "f1";
    case RankMetric::Auroc: return "auroc";
  }
  return "?";
}

RankMetric parse_rank_metric(const std::string& name) {
  for (auto m : all_rank_metrics())
    if (to_string(m) == name) return m;
  throw InputError("unknown metric '" + name + "'");
}

const std::vector<RankMetric>& all_rank_metrics() {
  static const std::vector<RankMetric> all = {RankMetric::Accuracy, RankMetric::Precision, RankMetric::Recall,
                                              RankMetric::F1, RankMetric::Auroc};
  return all;
}

namespace {

template <typename T>
void append_unique(std::vector<T>& v, const T& x) {
  if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(x);
}

double class_value(const ClassScores& s, RankMetric metric) {
  switch (metric) {
    case RankMetric::Precision: return s.precision;
    case RankMetric::Recall: return s.recall;
    case RankMetric::F1: return s.f1;
    case RankMetric::Auroc: return *s.auroc;
    case RankMetric::Accuracy: break;
  }
  return 0.0;
}

}  // namespace

RankTable rank_models(std::span<const EvaluationReport> reports, RankMetric metric) {
  RankTable table;
  table.metric = metric;
  std::map<std::pair<std::string, std::string>, const EvaluationReport*> lookup;
  for (const auto& r : reports) {
    append_unique(table.tasks, r.task_name);
    append_unique(table.models, r.model_name);
    if (!lookup.emplace(std::pair{r.task_name, r.model_name}, &r).second) {
      throw InputError("duplicate report for task '" + r.task_name + "', model '" + r.model_name + "'");
    }
  }
  if (table.models.empty()) throw InputError("rank_models: no reports");

  for (const auto& task : table.tasks) {
    std::vector<const EvaluationReport*> row;
    for (const auto& model : table.models) {
      auto it = lookup.find({task, model});
      if (it == lookup.end()) {
        throw InputError("missing report for task '" + task + "', model '" + model + "'");
      }
      row.push_back(it->second);
    }
    const auto& labels = row.front()->labels;
    for (const auto* r : row) {
      if (r->labels != labels) throw InputError("reports for task '" + task + "' use different label sets");
    }
    std::vector<std::size_t> classes;
    for (std::size_t c = 0; c < labels.size(); ++c) {
      const bool defined = metric != RankMetric::Auroc ||
                           std::all_of(row.begin(), row.end(), [&](auto* r) { return r->per_class[c].auroc.has_value(); });
      if (defined) classes.push_back(c);
    }
    std::vector<std::vector<double>> points;
    for (const auto* r : row) {
      std::vector<double> v;
      if (metric == RankMetric::Accuracy) {
        v.push_back(r->accuracy);
      } else {
        for (auto c : classes) v.push_back(class_value(r->per_class[c], metric));
      }
      points.push_back(std::move(v));
    }
    const auto ranks = fractional_ranks(pareto_fronts(points), points.size());
    for (std::size_t m = 0; m < table.models.size(); ++m) table.per_task[task][table.models[m]] = ranks[m];
  }
  for (const auto& model : table.models) {
    double sum = 0.0;
    for (const auto& task : table.tasks) sum += table.per_task[task][model];
    table.average_rank[model] = sum / static_cast<double>(table.tasks.size());
  }
  return table;
}

std::string to_csv(const RankTable& t, const std::string& config_hash) {
  std::ostringstream out;
  if (!config_hash.empty()) out << "# config " << config_hash << " metric " << to_string(t.metric) << '\n';
  out << "model";
  for (const auto& task : t.tasks) out << ',' << csv_field(task);
  out << ",Avg. rank\n";
  for (const auto& model : t.models) {
    out << csv_field(model);
    for (const auto& task : t.tasks) out << ',' << format_double(t.per_task.at(task).at(model));
    out << ',' << format_double(t.average_rank.at(model)) << '\n';
  }
  return out.str();
}

std::string to_json(const RankTable& t, const std::string& config_hash) {
  nlohmann::ordered_json j;
  if (!config_hash.empty()) j["config_hash"] = config_hash;
  j["metric"] = to_string(t.metric);
  j["tasks"] = t.tasks;
  j["models"] = t.models;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& model : t.models) {
    nlohmann::ordered_json ranks;
    for (const auto& task : t.tasks) ranks[task] = t.per_task.at(task).at(model);
    rows.push_back({{"model", model}, {"ranks", ranks}, {"average_rank", t.average_rank.at(model)}});
  }
  j["rows"] = std::move(rows);
  return j.dump(2) + "\n";
}

}  // namespace docrep
