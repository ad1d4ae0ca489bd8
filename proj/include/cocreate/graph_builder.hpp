#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "cocreate/ati.hpp"
#include "cocreate/error.hpp"
#include "cocreate/graph.hpp"
#include "cocreate/revision.hpp"
#include "cocreate/time_util.hpp"
#include "cocreate/topic_model.hpp"

namespace cocreate {

inline constexpr double kDefaultWindowDays = 182.625;  // 6 x 30.4375
inline constexpr std::int64_t kSecondsPerMonth = 2629800;  // 30.4375 days

/// Half-open interval [start, end) of the analysis timeline.
struct Window {
  std::size_t index = 0;
  Timestamp start{};
  Timestamp end{};
  bool partial = false;  // truncated at the horizon
};

struct NetworkSnapshot {
  ArticleRef article;
  Window window;
  WeightedGraph graph;  // giant component of the pruned window graph
  std::int64_t age_months = 0;
  double edge_retention = 1.0;  // edges(GCC) / edges(pruned graph)
  bool retention_flagged = false;  // retention outside [0.5, 1]
  std::size_t pre_prune_edge_count = 0;
  std::size_t section_count = 0;
  Timestamp first_revision{};
  Timestamp last_revision{};
  bool active = true;
};

/// Timestamp of the earliest revision taking part in a cross-editor
/// adjacency within the threshold, scanning the full revision stream.
inline Timestamp detect_onset(std::span<const RevisionRecord> revisions, const AtiParams& params) {
  bool two_editors = false;
  for (const auto& r : revisions)
    if (r.editor != revisions.front().editor) {
      two_editors = true;
      break;
    }
  if (!two_editors) throw Error(Errc::no_collaboration, "fewer than two distinct editors");

  const auto limit = params.threshold();
  for (std::size_t k = 1; k < revisions.size(); ++k) {
    const auto& a = revisions[k - 1];
    const auto& b = revisions[k];
    if (a.editor != b.editor && b.timestamp - a.timestamp <= limit) return a.timestamp;
  }
  throw Error(Errc::no_collaboration, "no cross-editor edits within the interaction threshold");
}

inline std::vector<Window> partition_windows(Timestamp onset, Timestamp horizon,
                                             double window_days = kDefaultWindowDays) {
  if (!(window_days > 0.0)) throw Error(Errc::config, "window_days must be positive");
  if (onset >= horizon) throw Error(Errc::empty_range, "onset is not before the horizon");
  const auto length = days_to_seconds(window_days);
  if (length <= Seconds{0}) throw Error(Errc::config, "window_days is shorter than one second");
  std::vector<Window> out;
  for (Timestamp start = onset; start < horizon; start += length) {
    Timestamp end = std::min(start + length, horizon);
    out.push_back({out.size(), start, end, end - start < length});
  }
  return out;
}

/// Revisions with timestamps inside [window.start, window.end).
inline std::span<const RevisionRecord> revisions_in(std::span<const RevisionRecord> sorted, const Window& w) {
  auto lo = std::lower_bound(sorted.begin(), sorted.end(), w.start,
                             [](const RevisionRecord& r, Timestamp t) { return r.timestamp < t; });
  auto hi = std::lower_bound(lo, sorted.end(), w.end,
                             [](const RevisionRecord& r, Timestamp t) { return r.timestamp < t; });
  return {lo, hi};
}

/// Section structure used to normalize content weights in a window: the
/// headings of the latest revision with content inside the window, else the
/// latest one before it, else every section marker seen up to the window end.
inline SectionSet window_sections(std::span<const RevisionRecord> sorted, const Window& w) {
  auto in_window = revisions_in(sorted, w);
  auto before_end = sorted.subspan(0, static_cast<std::size_t>(in_window.data() + in_window.size() - sorted.data()));
  for (auto it = before_end.rbegin(); it != before_end.rend(); ++it) {
    if (!it->content) continue;
    auto s = extract_sections(*it->content);
    if (!s.empty()) {
      s.source_revision_id = it->revision_id;
      return s;
    }
  }
  SectionSet markers;
  for (const auto& r : before_end)
    if (r.section_marker) markers.sections.insert(*r.section_marker);
  return markers;
}

/// Weighted co-creation graph for one window: each editor pair gets
/// w = W_T * W_C; zero-weight pairs are left out.
inline WeightedGraph build_network(std::span<const RevisionRecord> window_revisions, const SectionSet& sections,
                                   const AtiParams& params, const StopwordSet& stopwords) {
  if (sections.empty()) return {};

  std::map<EditorId, std::vector<RevisionRecord>> by_editor;
  for (const auto& r : window_revisions) by_editor[r.editor].push_back(r);

  struct EditorWork {
    const EditorId* id;
    const std::vector<RevisionRecord>* edits;
    SectionNames topics;
  };
  std::vector<EditorWork> editors;
  for (const auto& [id, edits] : by_editor) {
    SectionNames topics;
    for (const auto& r : edits) topics.merge(allocate_topics(r, sections, stopwords));
    editors.push_back({&id, &edits, std::move(topics)});
  }

  std::vector<WeightedEdge> edges;
  for (std::size_t a = 0; a < editors.size(); ++a) {
    for (std::size_t b = a + 1; b < editors.size(); ++b) {
      double w_c = content_weight(editors[a].topics, editors[b].topics, sections.size());
      if (w_c == 0.0) continue;
      auto w_t = ati_weight(build_pair_timeline(*editors[a].edits, *editors[b].edits), params);
      if (w_t == 0) continue;
      edges.push_back({*editors[a].id, *editors[b].id, w_t, w_c, static_cast<double>(w_t) * w_c});
    }
  }
  return WeightedGraph::from_edges(std::move(edges));
}

/// Number of edges prune_graph removes from a graph with `m` edges.
inline std::size_t prune_count(std::size_t m, double bottom_fraction) {
  // The epsilon keeps products like 0.3 * 10 from landing just below an integer.
  return static_cast<std::size_t>(std::floor(bottom_fraction * static_cast<double>(m) + 1e-9));
}

/// Removes the lightest floor(bottom_fraction * m) edges, ordered by (w, i, j).
inline WeightedGraph prune_graph(const WeightedGraph& g, double bottom_fraction = 0.30) {
  if (!(bottom_fraction >= 0.0 && bottom_fraction < 1.0))
    throw Error(Errc::domain, "prune fraction must lie in [0, 1)");
  auto edges = g.edges();
  std::sort(edges.begin(), edges.end(), [](const WeightedEdge& a, const WeightedEdge& b) {
    return std::tie(a.w, a.i, a.j) < std::tie(b.w, b.i, b.j);
  });
  auto drop = prune_count(edges.size(), bottom_fraction);
  edges.erase(edges.begin(), edges.begin() + static_cast<std::ptrdiff_t>(drop));
  return WeightedGraph::from_edges(std::move(edges));
}

struct ComponentResult {
  WeightedGraph graph;
  double edge_retention = 1.0;
};

/// Largest connected component by node count; ties go to more edges, then
/// to the component holding the lexicographically smallest editor id.
inline ComponentResult giant_component(const WeightedGraph& g) {
  if (g.empty()) throw Error(Errc::empty_graph, "graph has no nodes");
  auto adj = g.skeleton();
  std::size_t count = 0;
  auto label = component_labels(adj, count);

  std::vector<std::size_t> nodes(count, 0), edges(count, 0);
  for (auto l : label) ++nodes[l];
  for (const auto& e : g.edges()) ++edges[label[g.index_of(e.i)]];
  // Labels are assigned in sorted node order, so a lower label means a smaller minimum id.
  std::size_t best = 0;
  for (std::size_t c = 1; c < count; ++c)
    if (nodes[c] > nodes[best] || (nodes[c] == nodes[best] && edges[c] > edges[best])) best = c;

  std::vector<WeightedEdge> kept;
  for (const auto& e : g.edges())
    if (label[g.index_of(e.i)] == best) kept.push_back(e);
  ComponentResult out;
  out.edge_retention = static_cast<double>(kept.size()) / static_cast<double>(g.edge_count());
  out.graph = WeightedGraph::from_edges(std::move(kept));
  return out;
}

/// Keeps snapshots whose node count strictly exceeds fraction * (lifetime max).
inline std::vector<NetworkSnapshot> filter_active_windows(std::vector<NetworkSnapshot> snapshots,
                                                          double fraction = 0.15) {
  std::size_t max_nodes = 0;
  for (const auto& s : snapshots) max_nodes = std::max(max_nodes, s.graph.node_count());
  const double cutoff = fraction * static_cast<double>(max_nodes);
  std::erase_if(snapshots, [&](const NetworkSnapshot& s) { return !(static_cast<double>(s.graph.node_count()) > cutoff); });
  return snapshots;
}

/// Whole 30.4375-day months from the collaboration onset to `window_start`.
inline std::int64_t artifact_age_months(Timestamp onset, Timestamp window_start) {
  if (window_start < onset) throw Error(Errc::negative_age, "window starts before the collaboration onset");
  return (window_start - onset).count() / kSecondsPerMonth;
}

}  // namespace cocreate
