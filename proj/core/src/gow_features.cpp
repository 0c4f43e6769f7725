#include <algorithm>
#include <cmath>
#include <numeric>

#include "docrep/error.hpp"
#include "docrep/netrep.hpp"
#include "docrep/parallel.hpp"

namespace docrep {

std::string to_string(GowScheme scheme) {
  switch (scheme) {
    case GowScheme::Average: return "average";
    case GowScheme::Quartiles: return "quartiles";
    case GowScheme::Histogram: return "histogram";
  }
  return "?";
}

GowScheme parse_gow_scheme(const std::string& name) {
  if (name == "average") return GowScheme::Average;
  if (name == "quartiles" || name == "quantiles") return GowScheme::Quartiles;
  if (name == "histogram") return GowScheme::Histogram;
  throw InputError("unknown GOW aggregation '" + name + "'");
}

const std::vector<std::string>& macro_feature_names() {
  static const std::vector<std::string> names = {
      "n_nodes", "n_edges", "avg_degree", "avg_shortest_path",
      "global_efficiency", "local_efficiency", "transitivity"};
  return names;
}

const std::vector<std::string>& node_measure_names() {
  static const std::vector<std::string> names = {
      "k_in", "k_out", "s_in", "s_out", "e_in", "e_out",
      "y_in", "y_out", "betweenness", "closeness", "pagerank", "clustering"};
  return names;
}

namespace {

std::size_t per_measure(GowScheme scheme) {
  switch (scheme) {
    case GowScheme::Average: return 1;
    case GowScheme::Quartiles: return 5;
    case GowScheme::Histogram: return 10;
  }
  return 0;
}

}  // namespace

std::size_t gow_feature_count(GowScheme scheme) {
  return macro_feature_names().size() + node_measure_names().size() * per_measure(scheme);
}

std::vector<std::string> gow_column_names(GowScheme scheme) {
  std::vector<std::string> names = macro_feature_names();
  static const char* quartile_tags[] = {"min", "q1", "median", "q3", "max"};
  for (const auto& m : node_measure_names()) {
    switch (scheme) {
      case GowScheme::Average:
        names.push_back("mean_" + m);
        break;
      case GowScheme::Quartiles:
        for (auto tag : quartile_tags) names.push_back(m + "_" + tag);
        break;
      case GowScheme::Histogram:
        for (int b = 1; b <= 10; ++b) names.push_back(m + "_h" + std::to_string(b));
        break;
    }
  }
  return names;
}

double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) return 0.0;
  const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

std::vector<double> histogram10(std::span<const double> values) {
  std::vector<double> bins(10, 0.0);
  if (values.empty()) return bins;
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it, hi = *hi_it;
  const double n = static_cast<double>(values.size());
  if (hi == lo) {
    bins.back() = 1.0;
    return bins;
  }
  for (double v : values) {
    auto b = static_cast<std::size_t>(std::floor((v - lo) / (hi - lo) * 10.0));
    bins[std::min<std::size_t>(b, 9)] += 1.0;
  }
  for (auto& b : bins) b /= n;
  return bins;
}

GowFeatureVector aggregate(const NodeMeasureTable& table, const MacroFeatures& macro, GowScheme scheme) {
  GowFeatureVector out;
  out.scheme = scheme;
  out.column_names = gow_column_names(scheme);
  if (table.k_in.empty()) {
    out.values.assign(out.column_names.size(), 0.0);
    return out;
  }
  out.values = macro.values();
  std::vector<double> sorted;
  for (auto column : table.columns()) {
    switch (scheme) {
      case GowScheme::Average:
        out.values.push_back(std::accumulate(column.begin(), column.end(), 0.0) /
                             static_cast<double>(column.size()));
        break;
      case GowScheme::Quartiles:
        sorted.assign(column.begin(), column.end());
        std::sort(sorted.begin(), sorted.end());
        for (double q : {0.0, 0.25, 0.5, 0.75, 1.0}) out.values.push_back(quantile_sorted(sorted, q));
        break;
      case GowScheme::Histogram: {
        auto h = histogram10(column);
        out.values.insert(out.values.end(), h.begin(), h.end());
        break;
      }
    }
  }
  return out;
}

FeatureMatrix gow_matrix(std::span<const ProcessedDocument> docs, GowScheme scheme, std::size_t jobs) {
  std::vector<std::string> ids;
  ids.reserve(docs.size());
  for (const auto& d : docs) ids.push_back(d.id);
  FeatureMatrix m(std::move(ids), gow_column_names(scheme));
  parallel_for(docs.size(), jobs, [&](std::size_t r) {
    const auto net = build_network(docs[r]);
    const auto measures = compute_measures(net);
    const auto v = aggregate(measures.nodes, measures.macro, scheme);
    std::copy(v.values.begin(), v.values.end(), m.row(r).begin());
  });
  return m;
}

}  // namespace docrep
