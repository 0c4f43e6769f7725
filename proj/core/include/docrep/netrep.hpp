#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "docrep/document.hpp"
#include "docrep/feature_matrix.hpp"

namespace docrep {

/// Directed weighted word co-occurrence network of one document.
///
/// Self-loops (a stem followed by itself) are stored and count towards
/// degrees, strengths and PageRank; path, efficiency, clustering and
/// transitivity measures ignore them.
class LanguageNetwork {
public:
  struct Arc {
    std::size_t node;
    double weight;
  };

  LanguageNetwork() = default;
  explicit LanguageNetwork(std::vector<std::string> nodes);
  /// Anonymous nodes named "0".."n-1"; convenient for synthetic graphs.
  explicit LanguageNetwork(std::size_t n);

  /// Adds `weight` to the edge src → dst, creating it if needed.
  void add_edge(std::size_t src, std::size_t dst, double weight = 1.0);

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edge_count_; }
  const std::vector<std::string>& nodes() const { return nodes_; }

  /// Arcs sorted by neighbour index.
  const std::vector<Arc>& out_arcs(std::size_t v) const { return out_[v]; }
  const std::vector<Arc>& in_arcs(std::size_t v) const { return in_[v]; }
  double weight(std::size_t src, std::size_t dst) const;

  bool operator==(const LanguageNetwork&) const;

private:
  std::vector<std::string> nodes_;
  std::vector<std::vector<Arc>> out_;
  std::vector<std::vector<Arc>> in_;
  std::size_t edge_count_ = 0;
};

/// Nodes are the document's distinct stems in lexicographic order; each
/// adjacent pair inside a sentence adds 1 to the directed edge between them.
LanguageNetwork build_network(const ProcessedDocument& doc);

/// "src dst weight" lines in (src, dst) order.
void write_edge_list(std::ostream& out, const LanguageNetwork& net);

inline constexpr std::uint32_t kUnreachable = std::numeric_limits<std::uint32_t>::max();

/// Unweighted directed hop distances, row-major N × N; kUnreachable marks
/// unreachable pairs, the diagonal is 0.
std::vector<std::uint32_t> all_pairs_hops(const LanguageNetwork& net);

/// Mean hop distance over ordered pairs i ≠ j, divided by N(N−1); unreachable
/// pairs contribute 0. Zero for N < 2.
double avg_shortest_path(const LanguageNetwork& net);
double avg_shortest_path(std::size_t n, std::span<const std::uint32_t> hops);

/// Mean of 1/d over ordered pairs i ≠ j (1/∞ = 0). Zero for N < 2.
double global_efficiency(const LanguageNetwork& net);
double global_efficiency(std::size_t n, std::span<const std::uint32_t> hops);

/// Mean over all nodes of the global efficiency of the subgraph induced by
/// the node's in- and out-neighbours (node excluded). Nodes with fewer than
/// two neighbours contribute 0.
double local_efficiency(const LanguageNetwork& net);

struct DegreeStrength {
  std::vector<double> k_in, k_out, s_in, s_out;
};
DegreeStrength degrees_strengths(const LanguageNetwork& net);

struct DirectedPair {
  std::vector<double> in, out;
};
/// s / k per direction; 0 where k = 0.
DirectedPair selectivity(const LanguageNetwork& net);
/// Σ_j (w_ij / s_i)² per direction; 0 where s = 0.
DirectedPair inverse_participation_ratio(const LanguageNetwork& net);

/// 3 × triangles / connected triples on the undirected simple projection.
double transitivity(const LanguageNetwork& net);
/// 2 e_i / (k_i (k_i − 1)) on the undirected simple projection; 0 when k_i < 2.
std::vector<double> clustering(const LanguageNetwork& net);

/// Unnormalized directed betweenness over hop-count geodesics (Brandes).
std::vector<double> betweenness(const LanguageNetwork& net);

/// Outward closeness: (r − 1) / (N − 1) / Σ_reachable d, with r the size of
/// the reachable set including the node; 0 if nothing is reachable.
std::vector<double> closeness(const LanguageNetwork& net);
std::vector<double> closeness(std::size_t n, std::span<const std::uint32_t> hops);

struct PageRankOptions {
  double damping = 0.85;
  double tolerance = 1e-10;
  std::size_t max_iterations = 200;
};

/// Fixed point of C(v) = (1 − d) + d Σ_{u→v} C(u) / k_out(u), with the score
/// of dangling nodes spread uniformly; starts from C ≡ 1 and stops when the
/// largest change drops below the tolerance. Scores average to 1.
std::vector<double> pagerank(const LanguageNetwork& net, const PageRankOptions& opts = {});

struct NodeMeasureTable {
  std::vector<double> k_in, k_out, s_in, s_out, e_in, e_out, y_in, y_out;
  std::vector<double> betweenness, closeness, pagerank, clustering;

  /// The twelve per-node measures in aggregation order.
  std::vector<std::span<const double>> columns() const;
};

struct MacroFeatures {
  double n_nodes = 0, n_edges = 0, avg_degree = 0, avg_shortest_path = 0;
  double global_efficiency = 0, local_efficiency = 0, transitivity = 0;

  std::vector<double> values() const;
};

struct NetworkMeasures {
  NodeMeasureTable nodes;
  MacroFeatures macro;
};

/// Every measure of one network, sharing the all-pairs BFS.
NetworkMeasures compute_measures(const LanguageNetwork& net, const PageRankOptions& opts = {});

enum class GowScheme { Average, Quartiles, Histogram };

std::string to_string(GowScheme scheme);
GowScheme parse_gow_scheme(const std::string& name);

const std::vector<std::string>& macro_feature_names();
const std::vector<std::string>& node_measure_names();

/// Feature count of a scheme: 19, 67 or 127.
std::size_t gow_feature_count(GowScheme scheme);
std::vector<std::string> gow_column_names(GowScheme scheme);

struct GowFeatureVector {
  GowScheme scheme = GowScheme::Average;
  std::vector<double> values;
  std::vector<std::string> column_names;
};

/// Seven macro scalars followed by each node measure summarized as its mean,
/// as (min, Q1, median, Q3, max) with linearly interpolated quantiles, or as a
/// 10-bin relative-frequency histogram over [min, max]. Empty networks give
/// all zeros.
GowFeatureVector aggregate(const NodeMeasureTable& table, const MacroFeatures& macro, GowScheme scheme);

/// Linear-interpolation quantile of sorted values, q in [0, 1].
double quantile_sorted(std::span<const double> sorted, double q);

/// Relative frequencies over 10 equal-width bins on [min, max]; constant input
/// puts all mass in the last bin.
std::vector<double> histogram10(std::span<const double> values);

/// Network features for many documents, one row each; runs on `jobs` threads.
FeatureMatrix gow_matrix(std::span<const ProcessedDocument> docs, GowScheme scheme, std::size_t jobs = 1);

}  // namespace docrep
