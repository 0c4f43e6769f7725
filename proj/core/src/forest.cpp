#include "docrep/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "docrep/error.hpp"
#include "docrep/parallel.hpp"
#include "docrep/rng.hpp"

namespace docrep {

const DecisionTree::Node& DecisionTree::leaf_for(std::span<const double> row) const {
  const Node* n = &nodes.front();
  while (!n->is_leaf()) {
    n = &nodes[static_cast<std::size_t>(row[static_cast<std::size_t>(n->feature)] <= n->threshold ? n->left
                                                                                                 : n->right)];
  }
  return *n;
}

std::uint64_t tree_seed(std::uint64_t seed, std::size_t t) { return derive_seed(seed, t); }

std::vector<std::size_t> bootstrap_sample(std::uint64_t seed, std::size_t n) {
  Rng rng(seed);
  std::vector<std::size_t> s(n);
  for (auto& i : s) i = static_cast<std::size_t>(rng.below(n));
  return s;
}

namespace {

template <typename Counts>
std::uint32_t argmax(const Counts& counts) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < counts.size(); ++k) {
    if (counts[k] > counts[best]) best = k;
  }
  return static_cast<std::uint32_t>(best);
}

// Σ c² / n for a class histogram, 0 for empty.
double purity(std::span<const double> counts, double n) {
  if (n <= 0) return 0.0;
  double acc = 0.0;
  for (double c : counts) acc += c * c;
  return acc / n;
}

constexpr double kTieEps = 1e-12;

struct SplitSearch {
  std::vector<std::pair<double, std::uint32_t>> column;
  std::vector<double> left, total;

  std::optional<SplitChoice> run(const FeatureMatrix& x, std::span<const std::uint32_t> y, std::size_t n_classes,
                                 std::span<const std::size_t> samples, std::span<const std::size_t> features,
                                 std::size_t min_leaf) {
    const auto n = samples.size();
    const double nd = static_cast<double>(n);
    total.assign(n_classes, 0.0);
    for (auto s : samples) total[y[s]] += 1.0;
    std::optional<SplitChoice> best;
    for (auto f : features) {
      column.clear();
      for (auto s : samples) column.emplace_back(x.at(s, f), y[s]);
      std::sort(column.begin(), column.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      left.assign(n_classes, 0.0);
      for (std::size_t i = 0; i + 1 < n; ++i) {
        left[column[i].second] += 1.0;
        const double lo = column[i].first, hi = column[i + 1].first;
        if (!(lo < hi)) continue;
        const std::size_t n_left = i + 1;
        if (n_left < min_leaf || n - n_left < min_leaf) continue;
        const double nl = static_cast<double>(n_left), nr = nd - nl;
        double right_sq = 0.0;
        for (std::size_t k = 0; k < n_classes; ++k) {
          const double r = total[k] - left[k];
          right_sq += r * r;
        }
        const double impurity = (nd - purity(left, nl) - right_sq / nr) / nd;
        if (!best || impurity < best->impurity - kTieEps) {
          double thr = lo + (hi - lo) / 2.0;
          if (!(thr < hi)) thr = lo;
          best = SplitChoice{f, thr, impurity};
        }
      }
    }
    return best;
  }
};

struct GrownTree {
  DecisionTree tree;
  std::vector<bool> in_bag;
};

GrownTree grow_tree(const FeatureMatrix& x, std::span<const std::uint32_t> y, std::size_t n_classes,
                    std::size_t mtry, const ForestParams& params, std::uint64_t seed) {
  const auto n = x.rows();
  const auto p = x.cols();
  Rng rng(seed);
  std::vector<std::size_t> samples(n);
  for (auto& s : samples) s = static_cast<std::size_t>(rng.below(n));

  GrownTree out;
  out.in_bag.assign(n, false);
  for (auto s : samples) out.in_bag[s] = true;

  std::vector<std::size_t> feature_pool(p);
  std::iota(feature_pool.begin(), feature_pool.end(), 0);
  std::vector<std::size_t> chosen;
  SplitSearch search;

  struct Pending {
    std::size_t node, begin, end, depth;
  };
  auto& nodes = out.tree.nodes;
  nodes.emplace_back();
  std::vector<Pending> stack{{0, 0, n, 0}};
  std::vector<std::uint32_t> counts(n_classes);

  while (!stack.empty()) {
    const auto [node, begin, end, depth] = stack.back();
    stack.pop_back();
    const std::span<std::size_t> here(samples.data() + begin, end - begin);

    std::fill(counts.begin(), counts.end(), 0);
    for (auto s : here) ++counts[y[s]];
    const bool pure = std::count_if(counts.begin(), counts.end(), [](auto c) { return c > 0; }) <= 1;
    const bool depth_limited = params.max_depth && depth >= *params.max_depth;

    std::optional<SplitChoice> split;
    if (!pure && !depth_limited && here.size() >= 2 * params.min_leaf) {
      for (std::size_t k = 0; k < mtry; ++k) {
        const auto j = k + static_cast<std::size_t>(rng.below(p - k));
        std::swap(feature_pool[k], feature_pool[j]);
      }
      chosen.assign(feature_pool.begin(), feature_pool.begin() + static_cast<std::ptrdiff_t>(mtry));
      std::sort(chosen.begin(), chosen.end());
      split = search.run(x, y, n_classes, here, chosen, params.min_leaf);
    }

    if (!split) {
      nodes[node].counts = counts;
      nodes[node].prediction = argmax(counts);
      continue;
    }
    auto mid = std::partition(here.begin(), here.end(),
                              [&](std::size_t s) { return x.at(s, split->feature) <= split->threshold; });
    const auto cut = begin + static_cast<std::size_t>(mid - here.begin());
    const auto left = nodes.size();
    nodes.emplace_back();
    nodes.emplace_back();
    nodes[node].feature = static_cast<std::int32_t>(split->feature);
    nodes[node].threshold = split->threshold;
    nodes[node].left = static_cast<std::int32_t>(left);
    nodes[node].right = static_cast<std::int32_t>(left + 1);
    stack.push_back({left + 1, cut, end, depth + 1});
    stack.push_back({left, begin, cut, depth + 1});
  }
  return out;
}

void check_training_input(const FeatureMatrix& x, std::size_t n_labels, std::size_t n_classes) {
  if (x.rows() != n_labels) {
    throw InputError("train_forest: " + std::to_string(x.rows()) + " rows but " + std::to_string(n_labels) +
                     " labels");
  }
  if (x.rows() == 0 || x.cols() == 0) throw InputError("train_forest: empty training matrix");
  if (n_classes < 2) throw InputError("train_forest: need at least two classes");
  x.check_finite();
}

std::size_t resolve_mtry(const ForestParams& params, std::size_t p) {
  if (params.mtry) {
    if (*params.mtry < 1 || *params.mtry > p) {
      throw InputError("mtry must lie in [1, " + std::to_string(p) + "]");
    }
    return *params.mtry;
  }
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(p)))));
}

void check_columns(const ForestModel& model, const FeatureMatrix& x) {
  if (x.cols() != model.n_features) {
    throw InputError("forest expects " + std::to_string(model.n_features) + " features, got " +
                     std::to_string(x.cols()));
  }
}

std::vector<std::vector<std::uint32_t>> vote_counts(const ForestModel& model, const FeatureMatrix& x) {
  check_columns(model, x);
  std::vector<std::vector<std::uint32_t>> votes(x.rows(), std::vector<std::uint32_t>(model.labels.size(), 0));
  for (std::size_t r = 0; r < x.rows(); ++r) {
    for (const auto& t : model.trees) ++votes[r][t.predict(x.row(r))];
  }
  return votes;
}

}  // namespace

std::optional<SplitChoice> best_gini_split(const FeatureMatrix& x, std::span<const std::uint32_t> y,
                                           std::size_t n_classes, std::span<const std::size_t> samples,
                                           std::span<const std::size_t> features, std::size_t min_leaf) {
  std::vector<std::size_t> sorted(features.begin(), features.end());
  std::sort(sorted.begin(), sorted.end());
  SplitSearch search;
  return search.run(x, y, n_classes, samples, sorted, std::max<std::size_t>(min_leaf, 1));
}

std::pair<std::vector<std::string>, std::vector<std::uint32_t>> encode_labels(std::span<const std::string> y) {
  std::vector<std::string> labels(y.begin(), y.end());
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  std::vector<std::uint32_t> codes;
  codes.reserve(y.size());
  for (const auto& v : y) {
    codes.push_back(static_cast<std::uint32_t>(std::lower_bound(labels.begin(), labels.end(), v) - labels.begin()));
  }
  return {std::move(labels), std::move(codes)};
}

ForestModel train_forest(const FeatureMatrix& x, std::span<const std::uint32_t> y, std::vector<std::string> labels,
                         const ForestParams& params) {
  const auto n_classes = labels.size();
  check_training_input(x, y.size(), n_classes);
  for (auto c : y)
    if (c >= n_classes) throw InputError("train_forest: label code out of range");
  {
    std::vector<bool> present(n_classes, false);
    for (auto c : y) present[c] = true;
    if (std::count(present.begin(), present.end(), true) < 2) {
      throw InputError("train_forest: training labels contain a single class");
    }
  }
  if (params.n_trees == 0) throw InputError("train_forest: n_trees must be >= 1");
  if (params.min_leaf == 0) throw InputError("train_forest: min_leaf must be >= 1");

  ForestModel model;
  model.labels = std::move(labels);
  model.n_features = x.cols();
  model.mtry = resolve_mtry(params, x.cols());
  model.params = params;
  model.train_labels.assign(y.begin(), y.end());

  std::vector<GrownTree> grown(params.n_trees);
  parallel_for(params.n_trees, params.jobs, [&](std::size_t t) {
    grown[t] = grow_tree(x, y, n_classes, model.mtry, params, tree_seed(params.seed, t));
  });

  model.oob_votes.assign(x.rows(), std::vector<std::uint32_t>(n_classes, 0));
  model.trees.reserve(grown.size());
  for (auto& g : grown) {
    for (std::size_t r = 0; r < x.rows(); ++r) {
      if (!g.in_bag[r]) ++model.oob_votes[r][g.tree.predict(x.row(r))];
    }
    model.trees.push_back(std::move(g.tree));
  }
  return model;
}

ForestModel train_forest(const FeatureMatrix& x, std::span<const std::string> y, const ForestParams& params) {
  auto [labels, codes] = encode_labels(y);
  return train_forest(x, codes, std::move(labels), params);
}

std::vector<std::vector<double>> predict_proba(const ForestModel& model, const FeatureMatrix& x) {
  const auto votes = vote_counts(model, x);
  std::vector<std::vector<double>> out(votes.size());
  const double n = static_cast<double>(model.trees.size());
  for (std::size_t r = 0; r < votes.size(); ++r) {
    out[r].reserve(votes[r].size());
    for (auto v : votes[r]) out[r].push_back(static_cast<double>(v) / n);
  }
  return out;
}

std::vector<std::string> predict(const ForestModel& model, const FeatureMatrix& x) {
  const auto votes = vote_counts(model, x);
  std::vector<std::string> out;
  out.reserve(votes.size());
  for (const auto& v : votes) out.push_back(model.labels[argmax(v)]);
  return out;
}

double oob_error(const ForestModel& model) {
  std::size_t covered = 0, wrong = 0;
  for (std::size_t r = 0; r < model.oob_votes.size(); ++r) {
    const auto& v = model.oob_votes[r];
    if (std::accumulate(v.begin(), v.end(), std::uint64_t{0}) == 0) continue;
    ++covered;
    if (argmax(v) != model.train_labels[r]) ++wrong;
  }
  if (covered == 0) throw NumericError("no OOB coverage: every training row is in-bag for every tree");
  return static_cast<double>(wrong) / static_cast<double>(covered);
}

MtryTuning tune_mtry(const FeatureMatrix& x, std::span<const std::string> y, const ForestParams& params,
                     const TuneOptions& opts) {
  auto [labels, codes] = encode_labels(y);
  check_training_input(x, y.size(), labels.size());
  const auto p = x.cols();

  auto evaluate = [&](std::size_t mtry) {
    ForestParams trial = params;
    trial.n_trees = opts.n_trees;
    trial.mtry = mtry;
    return oob_error(train_forest(x, codes, labels, trial));
  };

  MtryTuning result;
  const auto start = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(p)))));
  double error_old = evaluate(start);
  result.tried.emplace_back(start, error_old);

  for (int direction : {-1, +1}) {
    std::size_t current = start;
    double improvement = 1.1 * opts.improve;
    while (improvement >= opts.improve) {
      const std::size_t previous = current;
      current = direction < 0
                    ? std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(current / opts.step_factor)))
                    : std::min<std::size_t>(p, static_cast<std::size_t>(std::floor(current * opts.step_factor)));
      if (current == previous) break;
      const double error = evaluate(current);
      result.tried.emplace_back(current, error);
      if (error_old <= 0.0) break;
      improvement = 1.0 - error / error_old;
      if (improvement > opts.improve) error_old = error;
    }
  }
  std::sort(result.tried.begin(), result.tried.end());
  result.tried.erase(std::unique(result.tried.begin(), result.tried.end(),
                                 [](const auto& a, const auto& b) { return a.first == b.first; }),
                     result.tried.end());
  result.best = std::min_element(result.tried.begin(), result.tried.end(), [](const auto& a, const auto& b) {
                  return a.second < b.second;
                })->first;
  return result;
}

std::string to_json(const ForestModel& model) {
  using nlohmann::json;
  json j;
  j["labels"] = model.labels;
  j["n_features"] = model.n_features;
  j["mtry"] = model.mtry;
  j["params"] = {{"n_trees", model.params.n_trees},
                 {"min_leaf", model.params.min_leaf},
                 {"max_depth", model.params.max_depth ? json(*model.params.max_depth) : json(nullptr)},
                 {"seed", model.params.seed}};
  j["train_labels"] = model.train_labels;
  j["oob_votes"] = model.oob_votes;
  json trees = json::array();
  for (const auto& t : model.trees) {
    json nodes = json::array();
    for (const auto& n : t.nodes) {
      if (n.is_leaf()) {
        nodes.push_back({{"counts", n.counts}, {"prediction", n.prediction}});
      } else {
        nodes.push_back({{"feature", n.feature}, {"threshold", n.threshold}, {"left", n.left}, {"right", n.right}});
      }
    }
    trees.push_back(std::move(nodes));
  }
  j["trees"] = std::move(trees);
  return j.dump();
}

ForestModel forest_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  ForestModel m;
  m.labels = j.at("labels").get<std::vector<std::string>>();
  m.n_features = j.at("n_features").get<std::size_t>();
  m.mtry = j.at("mtry").get<std::size_t>();
  const auto& p = j.at("params");
  m.params.n_trees = p.at("n_trees").get<std::size_t>();
  m.params.min_leaf = p.at("min_leaf").get<std::size_t>();
  if (!p.at("max_depth").is_null()) m.params.max_depth = p.at("max_depth").get<std::size_t>();
  m.params.seed = p.at("seed").get<std::uint64_t>();
  m.params.mtry = m.mtry;
  m.train_labels = j.at("train_labels").get<std::vector<std::uint32_t>>();
  m.oob_votes = j.at("oob_votes").get<std::vector<std::vector<std::uint32_t>>>();
  for (const auto& jt : j.at("trees")) {
    DecisionTree t;
    for (const auto& jn : jt) {
      DecisionTree::Node n;
      if (jn.contains("feature")) {
        n.feature = jn.at("feature").get<std::int32_t>();
        n.threshold = jn.at("threshold").get<double>();
        n.left = jn.at("left").get<std::int32_t>();
        n.right = jn.at("right").get<std::int32_t>();
      } else {
        n.counts = jn.at("counts").get<std::vector<std::uint32_t>>();
        n.prediction = jn.at("prediction").get<std::uint32_t>();
      }
      t.nodes.push_back(std::move(n));
    }
    if (t.nodes.empty()) throw InputError("forest JSON: empty tree");
    m.trees.push_back(std::move(t));
  }
  return m;
}

}  // namespace docrep
