#include <algorithm>
#include <cmath>
#include <queue>
#include <string>

#include "docrep/error.hpp"
#include "docrep/netrep.hpp"

namespace docrep {
namespace {

using Adjacency = std::vector<std::vector<std::size_t>>;

// Out-neighbour lists without self-loops.
Adjacency simple_out(const LanguageNetwork& net) {
  Adjacency adj(net.node_count());
  for (std::size_t v = 0; v < net.node_count(); ++v) {
    for (const auto& a : net.out_arcs(v)) {
      if (a.node != v) adj[v].push_back(a.node);
    }
  }
  return adj;
}

// Sorted undirected neighbour sets without self-loops.
Adjacency undirected(const LanguageNetwork& net) {
  Adjacency adj(net.node_count());
  for (std::size_t v = 0; v < net.node_count(); ++v) {
    for (const auto& a : net.out_arcs(v)) {
      if (a.node != v) adj[v].push_back(a.node);
    }
    for (const auto& a : net.in_arcs(v)) {
      if (a.node != v) adj[v].push_back(a.node);
    }
    std::sort(adj[v].begin(), adj[v].end());
    adj[v].erase(std::unique(adj[v].begin(), adj[v].end()), adj[v].end());
  }
  return adj;
}

void bfs(const Adjacency& adj, std::size_t source, std::span<std::uint32_t> dist,
         std::vector<std::size_t>& queue) {
  std::fill(dist.begin(), dist.end(), kUnreachable);
  dist[source] = 0;
  queue.clear();
  queue.push_back(source);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const auto v = queue[head];
    for (auto w : adj[v]) {
      if (dist[w] == kUnreachable) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
}

std::vector<std::uint32_t> all_pairs(const Adjacency& adj) {
  const auto n = adj.size();
  std::vector<std::uint32_t> hops(n * n);
  std::vector<std::size_t> queue;
  queue.reserve(n);
  for (std::size_t s = 0; s < n; ++s) bfs(adj, s, std::span(hops).subspan(s * n, n), queue);
  return hops;
}

bool contains(const std::vector<std::size_t>& sorted, std::size_t x) {
  return std::binary_search(sorted.begin(), sorted.end(), x);
}

// Edges among the undirected neighbours of each node.
std::vector<std::size_t> neighbour_links(const Adjacency& und) {
  std::vector<std::size_t> links(und.size(), 0);
  for (std::size_t v = 0; v < und.size(); ++v) {
    const auto& nb = und[v];
    for (std::size_t a = 0; a < nb.size(); ++a) {
      for (std::size_t b = a + 1; b < nb.size(); ++b) {
        if (contains(und[nb[a]], nb[b])) ++links[v];
      }
    }
  }
  return links;
}

}  // namespace

std::vector<std::uint32_t> all_pairs_hops(const LanguageNetwork& net) {
  return all_pairs(simple_out(net));
}

double avg_shortest_path(std::size_t n, std::span<const std::uint32_t> hops) {
  if (n < 2) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto d = hops[i * n + j];
      if (i != j && d != kUnreachable) total += d;
    }
  }
  return total / (static_cast<double>(n) * static_cast<double>(n - 1));
}

double avg_shortest_path(const LanguageNetwork& net) {
  return avg_shortest_path(net.node_count(), all_pairs_hops(net));
}

double global_efficiency(std::size_t n, std::span<const std::uint32_t> hops) {
  if (n < 2) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto d = hops[i * n + j];
      if (i != j && d != kUnreachable) total += 1.0 / d;
    }
  }
  return total / (static_cast<double>(n) * static_cast<double>(n - 1));
}

double global_efficiency(const LanguageNetwork& net) {
  return global_efficiency(net.node_count(), all_pairs_hops(net));
}

double local_efficiency(const LanguageNetwork& net) {
  const auto n = net.node_count();
  if (n == 0) return 0.0;
  const auto und = undirected(net);
  const auto out = simple_out(net);
  double total = 0.0;
  std::vector<std::ptrdiff_t> local(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& nb = und[i];
    const auto k = nb.size();
    if (k < 2) continue;
    for (std::size_t a = 0; a < k; ++a) local[nb[a]] = static_cast<std::ptrdiff_t>(a);
    Adjacency sub(k);
    for (std::size_t a = 0; a < k; ++a) {
      for (auto w : out[nb[a]]) {
        if (local[w] >= 0) sub[a].push_back(static_cast<std::size_t>(local[w]));
      }
    }
    for (auto v : nb) local[v] = -1;
    total += global_efficiency(k, all_pairs(sub));
  }
  return total / static_cast<double>(n);
}

DegreeStrength degrees_strengths(const LanguageNetwork& net) {
  const auto n = net.node_count();
  DegreeStrength ds{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n),
                    std::vector<double>(n)};
  for (std::size_t v = 0; v < n; ++v) {
    ds.k_out[v] = static_cast<double>(net.out_arcs(v).size());
    ds.k_in[v] = static_cast<double>(net.in_arcs(v).size());
    for (const auto& a : net.out_arcs(v)) ds.s_out[v] += a.weight;
    for (const auto& a : net.in_arcs(v)) ds.s_in[v] += a.weight;
  }
  return ds;
}

DirectedPair selectivity(const LanguageNetwork& net) {
  const auto ds = degrees_strengths(net);
  const auto n = net.node_count();
  DirectedPair e{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  for (std::size_t v = 0; v < n; ++v) {
    if (ds.k_in[v] > 0) e.in[v] = ds.s_in[v] / ds.k_in[v];
    if (ds.k_out[v] > 0) e.out[v] = ds.s_out[v] / ds.k_out[v];
  }
  return e;
}

DirectedPair inverse_participation_ratio(const LanguageNetwork& net) {
  const auto n = net.node_count();
  DirectedPair y{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  auto ipr = [](const std::vector<LanguageNetwork::Arc>& arcs) {
    double s = 0.0;
    for (const auto& a : arcs) s += a.weight;
    if (s <= 0) return 0.0;
    double acc = 0.0;
    for (const auto& a : arcs) acc += (a.weight / s) * (a.weight / s);
    return acc;
  };
  for (std::size_t v = 0; v < n; ++v) {
    y.in[v] = ipr(net.in_arcs(v));
    y.out[v] = ipr(net.out_arcs(v));
  }
  return y;
}

double transitivity(const LanguageNetwork& net) {
  const auto und = undirected(net);
  const auto links = neighbour_links(und);
  double closed = 0.0, triples = 0.0;
  for (std::size_t v = 0; v < und.size(); ++v) {
    const double k = static_cast<double>(und[v].size());
    closed += static_cast<double>(links[v]);
    triples += k * (k - 1) / 2.0;
  }
  return triples > 0 ? closed / triples : 0.0;
}

std::vector<double> clustering(const LanguageNetwork& net) {
  const auto und = undirected(net);
  const auto links = neighbour_links(und);
  std::vector<double> c(und.size(), 0.0);
  for (std::size_t v = 0; v < und.size(); ++v) {
    const double k = static_cast<double>(und[v].size());
    if (k >= 2) c[v] = 2.0 * static_cast<double>(links[v]) / (k * (k - 1));
  }
  return c;
}

std::vector<double> betweenness(const LanguageNetwork& net) {
  const auto n = net.node_count();
  const auto adj = simple_out(net);
  std::vector<double> cb(n, 0.0), sigma(n), delta(n);
  std::vector<std::uint32_t> dist(n);
  std::vector<std::size_t> order;
  order.reserve(n);
  for (std::size_t s = 0; s < n; ++s) {
    bfs(adj, s, dist, order);
    std::fill(sigma.begin(), sigma.end(), 0.0);
    sigma[s] = 1.0;
    for (auto v : order) {
      for (auto w : adj[v]) {
        if (dist[w] == dist[v] + 1) sigma[w] += sigma[v];
      }
    }
    std::fill(delta.begin(), delta.end(), 0.0);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const auto v = *it;
      for (auto w : adj[v]) {
        if (dist[w] == dist[v] + 1) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
      }
      if (v != s) cb[v] += delta[v];
    }
  }
  return cb;
}

std::vector<double> closeness(std::size_t n, std::span<const std::uint32_t> hops) {
  std::vector<double> c(n, 0.0);
  if (n < 2) return c;
  for (std::size_t v = 0; v < n; ++v) {
    double total = 0.0;
    std::size_t reached = 1;
    for (std::size_t t = 0; t < n; ++t) {
      const auto d = hops[v * n + t];
      if (t != v && d != kUnreachable) {
        total += d;
        ++reached;
      }
    }
    if (total > 0) {
      c[v] = (1.0 / total) * static_cast<double>(reached - 1) / static_cast<double>(n - 1);
    }
  }
  return c;
}

std::vector<double> closeness(const LanguageNetwork& net) {
  return closeness(net.node_count(), all_pairs_hops(net));
}

std::vector<double> pagerank(const LanguageNetwork& net, const PageRankOptions& opts) {
  const auto n = net.node_count();
  std::vector<double> score(n, 1.0), next(n);
  if (n == 0) return score;
  const double d = opts.damping;
  double residual = 0.0;
  for (std::size_t iter = 0; iter < opts.max_iterations; ++iter) {
    double dangling = 0.0;
    for (std::size_t u = 0; u < n; ++u) {
      if (net.out_arcs(u).empty()) dangling += score[u];
    }
    const double base = (1.0 - d) + d * dangling / static_cast<double>(n);
    std::fill(next.begin(), next.end(), base);
    for (std::size_t u = 0; u < n; ++u) {
      const auto& arcs = net.out_arcs(u);
      if (arcs.empty()) continue;
      const double share = d * score[u] / static_cast<double>(arcs.size());
      for (const auto& a : arcs) next[a.node] += share;
    }
    residual = 0.0;
    for (std::size_t v = 0; v < n; ++v) residual = std::max(residual, std::abs(next[v] - score[v]));
    score.swap(next);
    if (residual < opts.tolerance) return score;
  }
  throw NumericError("pagerank did not converge in " + std::to_string(opts.max_iterations) +
                     " iterations (residual " + std::to_string(residual) + ")");
}

std::vector<std::span<const double>> NodeMeasureTable::columns() const {
  return {k_in, k_out, s_in, s_out, e_in, e_out, y_in, y_out, betweenness, closeness, pagerank, clustering};
}

std::vector<double> MacroFeatures::values() const {
  return {n_nodes, n_edges, avg_degree, avg_shortest_path, global_efficiency, local_efficiency, transitivity};
}

NetworkMeasures compute_measures(const LanguageNetwork& net, const PageRankOptions& opts) {
  NetworkMeasures m;
  const auto n = net.node_count();
  const auto hops = all_pairs_hops(net);

  auto ds = degrees_strengths(net);
  auto sel = selectivity(net);
  auto ipr = inverse_participation_ratio(net);
  auto& t = m.nodes;
  t.k_in = std::move(ds.k_in);
  t.k_out = std::move(ds.k_out);
  t.s_in = std::move(ds.s_in);
  t.s_out = std::move(ds.s_out);
  t.e_in = std::move(sel.in);
  t.e_out = std::move(sel.out);
  t.y_in = std::move(ipr.in);
  t.y_out = std::move(ipr.out);
  t.betweenness = betweenness(net);
  t.closeness = closeness(n, hops);
  t.pagerank = pagerank(net, opts);
  t.clustering = clustering(net);

  auto& g = m.macro;
  g.n_nodes = static_cast<double>(n);
  g.n_edges = static_cast<double>(net.edge_count());
  g.avg_degree = n ? 2.0 * g.n_edges / g.n_nodes : 0.0;
  g.avg_shortest_path = avg_shortest_path(n, hops);
  g.global_efficiency = global_efficiency(n, hops);
  g.local_efficiency = local_efficiency(net);
  g.transitivity = transitivity(net);
  return m;
}

}  // namespace docrep
