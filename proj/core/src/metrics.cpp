#include "docrep/metrics.hpp"

#include <algorithm>
#include <memory>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "docrep/error.hpp"
#include "docrep/feature_matrix.hpp"

namespace docrep {

std::size_t ConfusionMatrix::total() const {
  std::size_t t = 0;
  for (const auto& r : counts) t = std::accumulate(r.begin(), r.end(), t);
  return t;
}

std::size_t ConfusionMatrix::trace() const {
  std::size_t t = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) t += counts[i][i];
  return t;
}

namespace {

std::size_t label_index(std::span<const std::string> labels, const std::string& v) {
  auto it = std::find(labels.begin(), labels.end(), v);
  if (it == labels.end()) throw InputError("label '" + v + "' not in the label set");
  return static_cast<std::size_t>(it - labels.begin());
}

void check_lengths(std::size_t a, std::size_t b) {
  if (a != b) {
    throw InputError("label vectors differ in length (" + std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

}  // namespace

ConfusionMatrix confusion_matrix(std::span<const std::string> y_true, std::span<const std::string> y_pred,
                                 std::span<const std::string> labels) {
  check_lengths(y_true.size(), y_pred.size());
  ConfusionMatrix cm;
  cm.labels.assign(labels.begin(), labels.end());
  cm.counts.assign(labels.size(), std::vector<std::size_t>(labels.size(), 0));
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    ++cm.counts[label_index(labels, y_true[i])][label_index(labels, y_pred[i])];
  }
  return cm;
}

double accuracy(std::span<const std::string> y_true, std::span<const std::string> y_pred) {
  check_lengths(y_true.size(), y_pred.size());
  if (y_true.empty()) throw InputError("accuracy of an empty prediction set");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < y_true.size(); ++i) hits += y_true[i] == y_pred[i];
  return static_cast<double>(hits) / static_cast<double>(y_true.size());
}

std::vector<ClassScores> per_class_prf(std::span<const std::string> y_true, std::span<const std::string> y_pred,
                                       std::span<const std::string> labels) {
  const auto cm = confusion_matrix(y_true, y_pred, labels);
  const auto k = labels.size();
  std::vector<ClassScores> out(k);
  for (std::size_t c = 0; c < k; ++c) {
    const double tp = static_cast<double>(cm.counts[c][c]);
    double fp = 0, fn = 0;
    for (std::size_t o = 0; o < k; ++o) {
      if (o == c) continue;
      fp += static_cast<double>(cm.counts[o][c]);
      fn += static_cast<double>(cm.counts[c][o]);
    }
    auto& s = out[c];
    s.precision = tp + fp > 0 ? tp / (tp + fp) : 0.0;
    s.recall = tp + fn > 0 ? tp / (tp + fn) : 0.0;
    s.f1 = s.precision + s.recall > 0 ? 2 * s.precision * s.recall / (s.precision + s.recall) : 0.0;
  }
  return out;
}

std::optional<double> auroc(std::span<const double> scores, std::span<const bool> positive) {
  check_lengths(scores.size(), positive.size());
  const auto n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return scores[a] < scores[b]; });
  // Midranks (1-based) summed over positives.
  double rank_sum = 0.0;
  std::size_t n_pos = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t t = i; t < j; ++t) {
      if (positive[order[t]]) {
        rank_sum += midrank;
        ++n_pos;
      }
    }
    i = j;
  }
  const auto n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0) return std::nullopt;
  const double np = static_cast<double>(n_pos), nn = static_cast<double>(n_neg);
  return (rank_sum - np * (np + 1) / 2.0) / (np * nn);
}

std::optional<double> auroc_ovr(std::span<const std::vector<double>> distributions,
                                std::span<const std::string> y_true, std::span<const std::string> labels,
                                std::size_t label_index) {
  check_lengths(distributions.size(), y_true.size());
  std::vector<double> scores;
  scores.reserve(y_true.size());
  std::unique_ptr<bool[]> positive(new bool[y_true.size()]);
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    scores.push_back(distributions[i].at(label_index));
    positive[i] = y_true[i] == labels[label_index];
  }
  return auroc(scores, std::span<const bool>(positive.get(), y_true.size()));
}

EvaluationReport evaluate(std::string model_name, std::string task_name, std::span<const std::string> y_true,
                          std::span<const std::string> y_pred, std::span<const std::vector<double>> distributions,
                          std::span<const std::string> labels) {
  EvaluationReport r;
  r.model_name = std::move(model_name);
  r.task_name = std::move(task_name);
  r.labels.assign(labels.begin(), labels.end());
  r.accuracy = accuracy(y_true, y_pred);
  r.per_class = per_class_prf(y_true, y_pred, labels);
  for (std::size_t c = 0; c < labels.size(); ++c) {
    r.per_class[c].auroc = auroc_ovr(distributions, y_true, labels, c);
  }
  return r;
}

std::string to_json(const EvaluationReport& r, const std::string& config_hash) {
  using nlohmann::ordered_json;
  ordered_json j;
  if (!config_hash.empty()) j["config_hash"] = config_hash;
  j["model"] = r.model_name;
  j["task"] = r.task_name;
  j["accuracy"] = r.accuracy;
  ordered_json classes = ordered_json::array();
  for (std::size_t c = 0; c < r.labels.size(); ++c) {
    const auto& s = r.per_class[c];
    classes.push_back({{"class", r.labels[c]},
                       {"precision", s.precision},
                       {"recall", s.recall},
                       {"f1", s.f1},
                       {"auroc", s.auroc ? ordered_json(*s.auroc) : ordered_json(nullptr)}});
  }
  j["per_class"] = std::move(classes);
  return j.dump(2) + "\n";
}

EvaluationReport report_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  EvaluationReport r;
  r.model_name = j.at("model").get<std::string>();
  r.task_name = j.at("task").get<std::string>();
  r.accuracy = j.at("accuracy").get<double>();
  for (const auto& c : j.at("per_class")) {
    r.labels.push_back(c.at("class").get<std::string>());
    ClassScores s;
    s.precision = c.at("precision").get<double>();
    s.recall = c.at("recall").get<double>();
    s.f1 = c.at("f1").get<double>();
    if (!c.at("auroc").is_null()) s.auroc = c.at("auroc").get<double>();
    r.per_class.push_back(s);
  }
  return r;
}

std::string to_csv(const EvaluationReport& r, const std::string& config_hash) {
  std::ostringstream out;
  if (!config_hash.empty()) out << "# config " << config_hash << '\n';
  out << "class,precision,recall,f1,auroc,accuracy\n";
  for (std::size_t c = 0; c < r.labels.size(); ++c) {
    const auto& s = r.per_class[c];
    out << csv_field(r.labels[c]) << ',' << format_double(s.precision) << ',' << format_double(s.recall) << ','
        << format_double(s.f1) << ',' << (s.auroc ? format_double(*s.auroc) : std::string("NA")) << ','
        << format_double(r.accuracy) << '\n';
  }
  return out.str();
}

}  // namespace docrep
