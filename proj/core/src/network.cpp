#include <algorithm>
#include <ostream>
#include <unordered_map>

#include "docrep/error.hpp"
#include "docrep/feature_matrix.hpp"
#include "docrep/netrep.hpp"

namespace docrep {
namespace {

// Inserts or accumulates into an arc list kept sorted by node.
bool accumulate(std::vector<LanguageNetwork::Arc>& arcs, std::size_t node, double w) {
  auto it = std::lower_bound(arcs.begin(), arcs.end(), node,
                             [](const LanguageNetwork::Arc& a, std::size_t n) { return a.node < n; });
  if (it != arcs.end() && it->node == node) {
    it->weight += w;
    return false;
  }
  arcs.insert(it, {node, w});
  return true;
}

}  // namespace

LanguageNetwork::LanguageNetwork(std::vector<std::string> nodes)
    : nodes_(std::move(nodes)), out_(nodes_.size()), in_(nodes_.size()) {}

LanguageNetwork::LanguageNetwork(std::size_t n) : out_(n), in_(n) {
  nodes_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) nodes_.push_back(std::to_string(i));
}

void LanguageNetwork::add_edge(std::size_t src, std::size_t dst, double weight) {
  if (src >= nodes_.size() || dst >= nodes_.size()) throw InputError("add_edge: node out of range");
  if (!(weight > 0)) throw InputError("add_edge: weight must be positive");
  if (accumulate(out_[src], dst, weight)) ++edge_count_;
  accumulate(in_[dst], src, weight);
}

double LanguageNetwork::weight(std::size_t src, std::size_t dst) const {
  const auto& arcs = out_.at(src);
  auto it = std::lower_bound(arcs.begin(), arcs.end(), dst,
                             [](const Arc& a, std::size_t n) { return a.node < n; });
  return it != arcs.end() && it->node == dst ? it->weight : 0.0;
}

bool LanguageNetwork::operator==(const LanguageNetwork& o) const {
  if (nodes_ != o.nodes_ || edge_count_ != o.edge_count_) return false;
  for (std::size_t v = 0; v < out_.size(); ++v) {
    if (out_[v].size() != o.out_[v].size()) return false;
    for (std::size_t k = 0; k < out_[v].size(); ++k) {
      if (out_[v][k].node != o.out_[v][k].node || out_[v][k].weight != o.out_[v][k].weight) return false;
    }
  }
  return true;
}

LanguageNetwork build_network(const ProcessedDocument& doc) {
  std::vector<std::string> stems;
  for (const auto& s : doc.sentences) stems.insert(stems.end(), s.begin(), s.end());
  std::sort(stems.begin(), stems.end());
  stems.erase(std::unique(stems.begin(), stems.end()), stems.end());
  std::unordered_map<std::string_view, std::size_t> index;
  for (std::size_t i = 0; i < stems.size(); ++i) index.emplace(stems[i], i);

  LanguageNetwork net(stems);
  for (const auto& s : doc.sentences) {
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
      net.add_edge(index.at(s[i]), index.at(s[i + 1]), 1.0);
    }
  }
  return net;
}

void write_edge_list(std::ostream& out, const LanguageNetwork& net) {
  for (std::size_t v = 0; v < net.node_count(); ++v) {
    for (const auto& a : net.out_arcs(v)) {
      out << net.nodes()[v] << ' ' << net.nodes()[a.node] << ' ' << format_double(a.weight) << '\n';
    }
  }
}

}  // namespace docrep
