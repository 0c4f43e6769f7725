#pragma once

// Brute-force reference implementations used by the unit and acceptance
// tests. Each one is deliberately naive and shares no code with the library.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Edge {
  std::size_t src, dst;
  double weight;
};

struct Graph {
  std::size_t n = 0;
  std::vector<Edge> edges;  // distinct (src, dst) pairs
};

/// Random directed weighted graph; self-loops allowed with small probability.
inline Graph random_graph(std::mt19937_64& gen, std::size_t max_n) {
  Graph g;
  g.n = 1 + gen() % max_n;
  const double p = std::uniform_real_distribution<double>(0.02, 0.4)(gen);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t i = 0; i < g.n; ++i) {
    for (std::size_t j = 0; j < g.n; ++j) {
      const double q = i == j ? p / 10 : p;
      if (u(gen) < q) g.edges.push_back({i, j, static_cast<double>(1 + gen() % 5)});
    }
  }
  return g;
}

/// Hop distances by Floyd–Warshall on the unweighted digraph (self-loops ignored).
inline std::vector<std::vector<double>> floyd_warshall(const Graph& g) {
  std::vector<std::vector<double>> d(g.n, std::vector<double>(g.n, kInf));
  for (std::size_t i = 0; i < g.n; ++i) d[i][i] = 0;
  for (const auto& e : g.edges)
    if (e.src != e.dst) d[e.src][e.dst] = 1;
  for (std::size_t k = 0; k < g.n; ++k)
    for (std::size_t i = 0; i < g.n; ++i)
      for (std::size_t j = 0; j < g.n; ++j)
        if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
  return d;
}

inline double avg_shortest_path(const std::vector<std::vector<double>>& d) {
  const auto n = d.size();
  if (n < 2) return 0;
  double s = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && d[i][j] != kInf) s += d[i][j];
  return s / static_cast<double>(n * (n - 1));
}

inline double global_efficiency(const std::vector<std::vector<double>>& d) {
  const auto n = d.size();
  if (n < 2) return 0;
  double s = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && d[i][j] != kInf) s += 1.0 / d[i][j];
  return s / static_cast<double>(n * (n - 1));
}

inline std::vector<double> closeness(const std::vector<std::vector<double>>& d) {
  const auto n = d.size();
  std::vector<double> c(n, 0.0);
  for (std::size_t v = 0; v < n; ++v) {
    double sum = 0;
    std::size_t reach = 1;
    for (std::size_t t = 0; t < n; ++t) {
      if (t != v && d[v][t] != kInf) {
        sum += d[v][t];
        ++reach;
      }
    }
    if (sum > 0) c[v] = (1.0 / sum) * static_cast<double>(reach - 1) / static_cast<double>(n - 1);
  }
  return c;
}

/// Betweenness from geodesic counts: σ(s,t) by dynamic programming over the
/// Floyd–Warshall distances, then σ(s,v)·σ(v,t)/σ(s,t) for every interior v.
inline std::vector<double> betweenness_counting(const Graph& g) {
  const auto d = floyd_warshall(g);
  const auto n = g.n;
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  for (const auto& e : g.edges)
    if (e.src != e.dst) adj[e.src][e.dst] = true;
  std::vector<std::vector<double>> sigma(n, std::vector<double>(n, 0.0));
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return d[s][a] < d[s][b]; });
    sigma[s][s] = 1;
    for (auto t : order) {
      if (t == s || d[s][t] == kInf) continue;
      for (std::size_t u = 0; u < n; ++u)
        if (adj[u][t] && d[s][u] + 1 == d[s][t]) sigma[s][t] += sigma[s][u];
    }
  }
  std::vector<double> b(n, 0.0);
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t = 0; t < n; ++t) {
      if (s == t || d[s][t] == kInf) continue;
      for (std::size_t v = 0; v < n; ++v) {
        if (v == s || v == t) continue;
        if (d[s][v] + d[v][t] == d[s][t]) b[v] += sigma[s][v] * sigma[v][t] / sigma[s][t];
      }
    }
  return b;
}

/// Betweenness by explicit enumeration of every shortest path (small graphs).
inline std::vector<double> betweenness_enumeration(const Graph& g) {
  const auto d = floyd_warshall(g);
  const auto n = g.n;
  std::vector<std::vector<std::size_t>> succ(n);
  for (const auto& e : g.edges)
    if (e.src != e.dst) succ[e.src].push_back(e.dst);
  std::vector<double> b(n, 0.0);
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t = 0; t < n; ++t) {
      if (s == t || d[s][t] == kInf) continue;
      std::vector<std::vector<std::size_t>> paths;
      std::vector<std::size_t> path{s};
      auto dfs = [&](auto&& self, std::size_t v) -> void {
        if (v == t) {
          paths.push_back(path);
          return;
        }
        if (path.size() - 1 >= d[s][t]) return;
        for (auto w : succ[v]) {
          if (std::find(path.begin(), path.end(), w) != path.end()) continue;
          path.push_back(w);
          self(self, w);
          path.pop_back();
        }
      };
      dfs(dfs, s);
      for (const auto& p : paths)
        for (std::size_t i = 1; i + 1 < p.size(); ++i) b[p[i]] += 1.0 / static_cast<double>(paths.size());
    }
  return b;
}

/// Undirected simple adjacency (self-loops dropped).
inline std::vector<std::vector<bool>> undirected(const Graph& g) {
  std::vector<std::vector<bool>> a(g.n, std::vector<bool>(g.n, false));
  for (const auto& e : g.edges)
    if (e.src != e.dst) a[e.src][e.dst] = a[e.dst][e.src] = true;
  return a;
}

/// Returns (3 × triangles, connected triples) by exhaustive enumeration.
inline std::pair<std::uint64_t, std::uint64_t> triangle_counts(const Graph& g) {
  const auto a = undirected(g);
  std::uint64_t triangles = 0, triples = 0;
  for (std::size_t i = 0; i < g.n; ++i)
    for (std::size_t j = i + 1; j < g.n; ++j)
      for (std::size_t k = j + 1; k < g.n; ++k)
        if (a[i][j] && a[j][k] && a[i][k]) ++triangles;
  for (std::size_t c = 0; c < g.n; ++c)
    for (std::size_t i = 0; i < g.n; ++i)
      for (std::size_t j = i + 1; j < g.n; ++j)
        if (i != c && j != c && a[c][i] && a[c][j]) ++triples;
  return {3 * triangles, triples};
}

/// Per node: (links among neighbours, neighbour count) on the undirected projection.
inline std::vector<std::pair<std::uint64_t, std::uint64_t>> neighbour_links(const Graph& g) {
  const auto a = undirected(g);
  std::vector<std::pair<std::uint64_t, std::uint64_t>> out(g.n);
  for (std::size_t v = 0; v < g.n; ++v) {
    std::vector<std::size_t> nb;
    for (std::size_t u = 0; u < g.n; ++u)
      if (a[v][u]) nb.push_back(u);
    std::uint64_t links = 0;
    for (std::size_t i = 0; i < nb.size(); ++i)
      for (std::size_t j = i + 1; j < nb.size(); ++j)
        if (a[nb[i]][nb[j]]) ++links;
    out[v] = {links, nb.size()};
  }
  return out;
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, descending.
inline std::vector<double> jacobi_eigenvalues(std::vector<std::vector<double>> a) {
  const auto n = a.size();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
        const double c = 1 / std::sqrt(t * t + 1), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a[i][i];
  std::sort(ev.rbegin(), ev.rend());
  return ev;
}

/// Sample covariance (n − 1 denominator) of row-major data.
inline std::vector<std::vector<double>> covariance(const std::vector<std::vector<double>>& x) {
  const auto n = x.size(), m = x.front().size();
  std::vector<double> mean(m, 0.0);
  for (const auto& r : x)
    for (std::size_t j = 0; j < m; ++j) mean[j] += r[j] / static_cast<double>(n);
  std::vector<std::vector<double>> c(m, std::vector<double>(m, 0.0));
  for (const auto& r : x)
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) c[i][j] += (r[i] - mean[i]) * (r[j] - mean[j]) / static_cast<double>(n - 1);
  return c;
}

inline bool dominates(const std::vector<double>& a, const std::vector<double>& b) {
  bool strict = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return false;
    if (a[i] > b[i]) strict = true;
  }
  return strict;
}

/// Repeatedly removes the points no remaining point dominates.
inline std::vector<std::vector<std::size_t>> pareto_peeling(const std::vector<std::vector<double>>& pts) {
  std::vector<bool> removed(pts.size(), false);
  std::vector<std::vector<std::size_t>> fronts;
  std::size_t left = pts.size();
  while (left > 0) {
    std::vector<std::size_t> front;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (removed[i]) continue;
      bool dominated = false;
      for (std::size_t j = 0; j < pts.size() && !dominated; ++j)
        if (!removed[j] && j != i && dominates(pts[j], pts[i])) dominated = true;
      if (!dominated) front.push_back(i);
    }
    for (auto i : front) removed[i] = true;
    left -= front.size();
    fronts.push_back(front);
  }
  return fronts;
}

/// Fraction of (positive, negative) pairs ordered correctly, ties counting 1/2.
inline std::optional<double> auroc_pairs(const std::vector<double>& scores, const std::vector<bool>& pos) {
  double num = 0;
  std::uint64_t pairs = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!pos[i]) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (pos[j]) continue;
      ++pairs;
      if (scores[i] > scores[j]) num += 1;
      else if (scores[i] == scores[j]) num += 0.5;
    }
  }
  if (pairs == 0) return std::nullopt;
  return num / static_cast<double>(pairs);
}

struct GiniSplit {
  std::size_t feature;
  double threshold;
  double impurity;
};

/// Tries every feature in `features` and every midpoint between consecutive
/// distinct values; keeps the lowest weighted child impurity (ties: lower
/// feature, then lower threshold). Both children need ≥ min_leaf samples.
inline std::optional<GiniSplit> exhaustive_gini(const std::vector<std::vector<double>>& x,
                                                 const std::vector<std::uint32_t>& y, std::size_t n_classes,
                                                 const std::vector<std::size_t>& samples,
                                                 const std::vector<std::size_t>& features, std::size_t min_leaf) {
  auto gini = [&](const std::vector<double>& c, double total) {
    double g = 1;
    for (double v : c) g -= (v / total) * (v / total);
    return g;
  };
  std::optional<GiniSplit> best;
  std::vector<std::size_t> sorted_features = features;
  std::sort(sorted_features.begin(), sorted_features.end());
  for (auto f : sorted_features) {
    std::vector<double> values;
    for (auto s : samples) values.push_back(x[s][f]);
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    for (std::size_t k = 0; k + 1 < values.size(); ++k) {
      const double thr = values[k] + (values[k + 1] - values[k]) / 2;
      std::vector<double> l(n_classes, 0), r(n_classes, 0);
      double nl = 0, nr = 0;
      for (auto s : samples) {
        if (x[s][f] <= thr) {
          l[y[s]] += 1;
          nl += 1;
        } else {
          r[y[s]] += 1;
          nr += 1;
        }
      }
      if (nl < static_cast<double>(min_leaf) || nr < static_cast<double>(min_leaf)) continue;
      const double imp = (nl * gini(l, nl) + nr * gini(r, nr)) / (nl + nr);
      if (!best || imp < best->impurity - 1e-12) best = GiniSplit{f, thr, imp};
    }
  }
  return best;
}

}  // namespace oracle
