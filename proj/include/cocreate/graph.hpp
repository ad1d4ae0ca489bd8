#pragma once

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <ranges>
#include <tuple>
#include <vector>

#include "cocreate/error.hpp"
#include "cocreate/revision.hpp"

namespace cocreate {

/// Undirected edge with its temporal, content and combined weights.
/// Endpoints are stored with i < j.
struct WeightedEdge {
  EditorId i;
  EditorId j;
  std::int64_t w_t = 0;
  double w_c = 0.0;
  double w = 0.0;
};

/// Index-based adjacency lists; the unweighted skeleton the metrics run on.
using Skeleton = std::vector<std::vector<std::size_t>>;

template <class G>
concept AdjacencyList = std::ranges::random_access_range<G> &&
                        std::ranges::input_range<std::ranges::range_value_t<G>> &&
                        std::integral<std::ranges::range_value_t<std::ranges::range_value_t<G>>>;

/// Immutable weighted collaboration graph. Nodes are exactly the endpoints
/// of its edges, kept sorted; edges are sorted by (i, j).
class WeightedGraph {
 public:
  WeightedGraph() = default;

  /// Normalizes endpoint order and rejects self-loops, duplicates and
  /// non-positive weights.
  static WeightedGraph from_edges(std::vector<WeightedEdge> edges) {
    WeightedGraph g;
    for (auto& e : edges) {
      if (e.i == e.j) throw Error(Errc::domain, "self-loop on '" + e.i.str() + "'");
      if (!(e.w > 0.0)) throw Error(Errc::domain, "edge " + e.i.str() + " - " + e.j.str() + " has non-positive weight");
      if (e.j < e.i) std::swap(e.i, e.j);
    }
    std::sort(edges.begin(), edges.end(), [](const WeightedEdge& a, const WeightedEdge& b) {
      return std::tie(a.i, a.j) < std::tie(b.i, b.j);
    });
    for (std::size_t k = 1; k < edges.size(); ++k)
      if (edges[k].i == edges[k - 1].i && edges[k].j == edges[k - 1].j)
        throw Error(Errc::domain, "duplicate edge " + edges[k].i.str() + " - " + edges[k].j.str());

    for (const auto& e : edges) {
      g.nodes_.push_back(e.i);
      g.nodes_.push_back(e.j);
    }
    std::sort(g.nodes_.begin(), g.nodes_.end());
    g.nodes_.erase(std::unique(g.nodes_.begin(), g.nodes_.end()), g.nodes_.end());
    g.edges_ = std::move(edges);
    return g;
  }

  const std::vector<EditorId>& nodes() const noexcept { return nodes_; }
  const std::vector<WeightedEdge>& edges() const noexcept { return edges_; }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  bool empty() const noexcept { return nodes_.empty(); }

  std::size_t index_of(const EditorId& id) const {
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id);
    if (it == nodes_.end() || *it != id) throw Error(Errc::domain, "unknown node '" + id.str() + "'");
    return static_cast<std::size_t>(it - nodes_.begin());
  }

  Skeleton skeleton() const {
    Skeleton adj(nodes_.size());
    for (const auto& e : edges_) {
      auto a = index_of(e.i);
      auto b = index_of(e.j);
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
    return adj;
  }

 private:
  std::vector<EditorId> nodes_;
  std::vector<WeightedEdge> edges_;
};

/// Component label per node (labels numbered in order of first node).
template <AdjacencyList G>
std::vector<std::size_t> component_labels(const G& adj, std::size_t& count) {
  const std::size_t n = std::ranges::size(adj);
  constexpr auto unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> label(n, unset);
  std::vector<std::size_t> stack;
  count = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (label[s] != unset) continue;
    label[s] = count;
    stack.push_back(s);
    while (!stack.empty()) {
      auto v = stack.back();
      stack.pop_back();
      for (auto u : adj[v]) {
        auto uu = static_cast<std::size_t>(u);
        if (label[uu] == unset) {
          label[uu] = count;
          stack.push_back(uu);
        }
      }
    }
    ++count;
  }
  return label;
}

template <AdjacencyList G>
bool is_connected(const G& adj) {
  std::size_t count = 0;
  component_labels(adj, count);
  return count <= 1;
}

}  // namespace cocreate
