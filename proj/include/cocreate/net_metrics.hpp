#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <queue>
#include <ranges>
#include <string>
#include <vector>

#include "cocreate/error.hpp"
#include "cocreate/graph.hpp"
#include "cocreate/graph_builder.hpp"

// All metrics act on the unweighted skeleton. Graphs are simple and undirected:
// every edge appears in both endpoint lists, no self-loops, no multi-edges.

namespace cocreate {

template <AdjacencyList G>
double average_degree(const G& adj) {
  const std::size_t n = std::ranges::size(adj);
  if (n == 0) throw Error(Errc::empty_graph, "average degree of an empty graph");
  std::size_t endpoint_sum = 0;
  for (const auto& nbrs : adj) endpoint_sum += std::ranges::size(nbrs);
  return static_cast<double>(endpoint_sum) / static_cast<double>(n);
}

/// Mean local clustering; nodes of degree below two contribute zero.
template <AdjacencyList G>
double average_clustering(const G& adj) {
  const std::size_t n = std::ranges::size(adj);
  if (n == 0) throw Error(Errc::empty_graph, "clustering of an empty graph");
  std::vector<char> mark(n, 0);
  double total = 0.0;
  for (std::size_t v = 0; v < n; ++v) {
    const auto deg = static_cast<std::size_t>(std::ranges::size(adj[v]));
    if (deg < 2) continue;
    for (auto u : adj[v]) mark[static_cast<std::size_t>(u)] = 1;
    std::size_t links = 0;
    for (auto u : adj[v])
      for (auto w : adj[static_cast<std::size_t>(u)])
        if (mark[static_cast<std::size_t>(w)]) ++links;
    for (auto u : adj[v]) mark[static_cast<std::size_t>(u)] = 0;
    // each neighbour-neighbour link was seen from both ends
    total += static_cast<double>(links) / static_cast<double>(deg * (deg - 1));
  }
  return total / static_cast<double>(n);
}

namespace detail {

template <AdjacencyList G>
std::vector<std::int64_t> bfs_distances(const G& adj, std::size_t source) {
  std::vector<std::int64_t> dist(std::ranges::size(adj), -1);
  std::queue<std::size_t> q;
  dist[source] = 0;
  q.push(source);
  while (!q.empty()) {
    auto v = q.front();
    q.pop();
    for (auto u : adj[v]) {
      auto uu = static_cast<std::size_t>(u);
      if (dist[uu] < 0) {
        dist[uu] = dist[v] + 1;
        q.push(uu);
      }
    }
  }
  return dist;
}

}  // namespace detail

/// Mean hop distance over all unordered node pairs.
template <AdjacencyList G>
double average_shortest_path(const G& adj) {
  const std::size_t n = std::ranges::size(adj);
  if (n < 2) throw Error(Errc::undefined_path, "average shortest path needs at least two nodes");
  std::int64_t sum = 0;
  for (std::size_t s = 0; s < n; ++s) {
    auto dist = detail::bfs_distances(adj, s);
    for (std::size_t t = 0; t < n; ++t) {
      if (dist[t] < 0) throw Error(Errc::must_be_connected, "graph is disconnected; pass the giant component");
      sum += dist[t];
    }
  }
  return static_cast<double>(sum) / static_cast<double>(n * (n - 1));
}

/// Node betweenness normalized by (n-1)(n-2)/2, accumulated with Brandes'
/// single-source dependency recursion.
template <AdjacencyList G>
std::vector<double> normalized_betweenness(const G& adj) {
  const std::size_t n = std::ranges::size(adj);
  std::vector<double> bc(n, 0.0);
  if (n < 3) return bc;

  std::vector<std::size_t> order;
  std::vector<std::vector<std::size_t>> preds(n);
  std::vector<double> sigma(n), delta(n);
  std::vector<std::int64_t> dist(n);
  order.reserve(n);

  for (std::size_t s = 0; s < n; ++s) {
    order.clear();
    for (std::size_t v = 0; v < n; ++v) {
      preds[v].clear();
      sigma[v] = 0.0;
      delta[v] = 0.0;
      dist[v] = -1;
    }
    sigma[s] = 1.0;
    dist[s] = 0;
    std::queue<std::size_t> q;
    q.push(s);
    while (!q.empty()) {
      auto v = q.front();
      q.pop();
      order.push_back(v);
      for (auto u : adj[v]) {
        auto w = static_cast<std::size_t>(u);
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          q.push(w);
        }
        if (dist[w] == dist[v] + 1) {
          sigma[w] += sigma[v];
          preds[w].push_back(v);
        }
      }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      auto w = *it;
      for (auto v : preds[w]) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
      if (w != s) bc[w] += delta[w];
    }
  }
  // Every unordered pair was counted from both ends.
  const double scale = 1.0 / static_cast<double>((n - 1) * (n - 2));
  for (auto& b : bc) b *= scale;
  return bc;
}

/// Freeman graph centralization of normalized betweenness:
/// sum over v of (b_max - b_v) / (n - 1). A star scores 1, a clique 0.
template <AdjacencyList G>
double betweenness_centralization(const G& adj) {
  const std::size_t n = std::ranges::size(adj);
  if (n < 3) throw Error(Errc::undefined_centralization, "betweenness centralization needs at least three nodes");
  if (!is_connected(adj)) throw Error(Errc::must_be_connected, "graph is disconnected; pass the giant component");
  auto bc = normalized_betweenness(adj);
  double peak = *std::max_element(bc.begin(), bc.end());
  double total = 0.0;
  for (double b : bc) total += peak - b;
  return total / static_cast<double>(n - 1);
}

/// One analysed network.
struct MetricsRow {
  ArticleRef article;
  std::size_t window_index = 0;
  std::size_t n_nodes = 0;
  std::size_t n_edges = 0;
  double avg_degree = 0.0;
  double avg_clustering = 0.0;
  double avg_shortest_path = 0.0;
  double betweenness_centralization = 0.0;
  std::int64_t age_months = 0;
  double edge_retention = 1.0;
};

/// Computes all four measures, or nullopt when the network is below the
/// size floor (at least three nodes are always required).
inline std::optional<MetricsRow> summarize_network(const NetworkSnapshot& snap, std::size_t min_nodes = 4) {
  const auto n = snap.graph.node_count();
  if (n < std::max<std::size_t>(min_nodes, 3)) return std::nullopt;
  auto adj = snap.graph.skeleton();
  MetricsRow row;
  row.article = snap.article;
  row.window_index = snap.window.index;
  row.n_nodes = n;
  row.n_edges = snap.graph.edge_count();
  row.avg_degree = average_degree(adj);
  row.avg_clustering = average_clustering(adj);
  row.avg_shortest_path = average_shortest_path(adj);
  row.betweenness_centralization = betweenness_centralization(adj);
  row.age_months = snap.age_months;
  row.edge_retention = snap.edge_retention;
  return row;
}

}  // namespace cocreate
