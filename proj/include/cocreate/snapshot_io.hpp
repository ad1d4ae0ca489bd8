#pragma once

#include <charconv>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "cocreate/csv.hpp"
#include "cocreate/error.hpp"
#include "cocreate/graph_builder.hpp"

// Edge-list text format for one snapshot:
//
//   # article=<title>\tcategory=<label>\twindow=<index>\tstart=<iso>\tend=<iso>\tpartial=<0|1>
//     \tage_months=<int>\tedge_retention=<ratio>\tretention_flagged=<0|1>\tpre_prune_edges=<int>
//     \tsections=<int>\tfirst_revision=<iso>\tlast_revision=<iso>\tactive=<0|1>
//   i<TAB>j<TAB>w_t<TAB>w_c<TAB>w
//   ...
//
// (The header is a single line.) Editors are ordered i < j and lines follow the graph's edge order.

namespace cocreate {

namespace detail {

inline void require_tab_free(std::string_view s, const char* what) {
  if (s.find_first_of("\t\n\r") != std::string_view::npos)
    throw Error(Errc::domain, std::string(what) + " contains a tab or newline: '" + std::string(s) + "'");
}

}  // namespace detail

inline std::string write_snapshot(const NetworkSnapshot& s) {
  detail::require_tab_free(s.article.title, "article title");
  detail::require_tab_free(s.article.category, "category");
  std::string out = "# article=" + s.article.title;
  out += "\tcategory=" + s.article.category;
  out += "\twindow=" + std::to_string(s.window.index);
  out += "\tstart=" + format_timestamp(s.window.start);
  out += "\tend=" + format_timestamp(s.window.end);
  out += std::string("\tpartial=") + (s.window.partial ? "1" : "0");
  out += "\tage_months=" + std::to_string(s.age_months);
  out += "\tedge_retention=" + csv::format_number(s.edge_retention);
  out += std::string("\tretention_flagged=") + (s.retention_flagged ? "1" : "0");
  out += "\tpre_prune_edges=" + std::to_string(s.pre_prune_edge_count);
  out += "\tsections=" + std::to_string(s.section_count);
  out += "\tfirst_revision=" + format_timestamp(s.first_revision);
  out += "\tlast_revision=" + format_timestamp(s.last_revision);
  out += std::string("\tactive=") + (s.active ? "1" : "0");
  out += '\n';
  for (const auto& e : s.graph.edges()) {
    detail::require_tab_free(e.i.str(), "editor id");
    detail::require_tab_free(e.j.str(), "editor id");
    out += e.i.str() + '\t' + e.j.str() + '\t' + std::to_string(e.w_t) + '\t' + csv::format_number(e.w_c) + '\t' +
           csv::format_number(e.w) + '\n';
  }
  return out;
}

inline NetworkSnapshot read_snapshot(std::string_view text) {
  auto split = [](std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t pos = 0;
    for (;;) {
      auto next = s.find(sep, pos);
      parts.push_back(s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
      if (next == std::string_view::npos) break;
      pos = next + 1;
    }
    return parts;
  };
  auto to_int = [](std::string_view s, const char* what) {
    long long v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
      throw Error(Errc::parse, std::string(what) + " is not an integer: '" + std::string(s) + "'");
    return v;
  };
  auto to_double = [](std::string_view s, const char* what) {
    double v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
      throw Error(Errc::parse, std::string(what) + " is not a number: '" + std::string(s) + "'");
    return v;
  };
  auto to_time = [](std::string_view s, const char* what) {
    auto t = parse_timestamp(s);
    if (!t) throw Error(Errc::parse, std::string(what) + " is not a timestamp: '" + std::string(s) + "'");
    return *t;
  };

  auto lines = split(text, '\n');
  if (lines.empty() || !lines[0].starts_with("# ")) throw Error(Errc::parse, "snapshot header line missing");
  std::map<std::string, std::string, std::less<>> meta;
  for (auto field : split(lines[0].substr(2), '\t')) {
    auto eq = field.find('=');
    if (eq == std::string_view::npos) throw Error(Errc::parse, "header field without '=': '" + std::string(field) + "'");
    meta.emplace(std::string(field.substr(0, eq)), std::string(field.substr(eq + 1)));
  }
  auto get = [&](const char* key) -> const std::string& {
    auto it = meta.find(key);
    if (it == meta.end()) throw Error(Errc::parse, std::string("header field '") + key + "' missing");
    return it->second;
  };

  NetworkSnapshot s;
  s.article = {get("article"), get("category")};
  s.window.index = static_cast<std::size_t>(to_int(get("window"), "window"));
  s.window.start = to_time(get("start"), "start");
  s.window.end = to_time(get("end"), "end");
  s.window.partial = get("partial") == "1";
  s.age_months = to_int(get("age_months"), "age_months");
  s.edge_retention = to_double(get("edge_retention"), "edge_retention");
  s.retention_flagged = get("retention_flagged") == "1";
  s.pre_prune_edge_count = static_cast<std::size_t>(to_int(get("pre_prune_edges"), "pre_prune_edges"));
  s.section_count = static_cast<std::size_t>(to_int(get("sections"), "sections"));
  s.first_revision = to_time(get("first_revision"), "first_revision");
  s.last_revision = to_time(get("last_revision"), "last_revision");
  s.active = get("active") == "1";

  std::vector<WeightedEdge> edges;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    auto line = lines[k];
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    auto cols = split(line, '\t');
    if (cols.size() != 5) throw Error(Errc::parse, "edge line " + std::to_string(k + 1) + " needs 5 tab-separated columns");
    edges.push_back({EditorId(cols[0]), EditorId(cols[1]), to_int(cols[2], "w_t"), to_double(cols[3], "w_c"),
                     to_double(cols[4], "w")});
  }
  s.graph = WeightedGraph::from_edges(std::move(edges));
  return s;
}

}  // namespace cocreate
