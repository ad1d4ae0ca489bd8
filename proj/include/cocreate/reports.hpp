#pragma once

#include <algorithm>
#include <charconv>
#include <map>
#include <optional>
#include <set>
#include <tuple>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cocreate/csv.hpp"
#include "cocreate/error.hpp"
#include "cocreate/graph_builder.hpp"
#include "cocreate/net_metrics.hpp"
#include "cocreate/regression.hpp"

namespace cocreate {

inline const std::vector<std::string>& metrics_header() {
  static const std::vector<std::string> h{"article",        "category",          "window_index",
                                          "n_nodes",        "n_edges",           "avg_degree",
                                          "avg_clustering", "avg_shortest_path", "betweenness_centralization",
                                          "age_months",     "edge_retention"};
  return h;
}

inline std::string write_metrics_csv(std::span<const MetricsRow> rows) {
  std::string out = csv::join_row(metrics_header());
  for (const auto& r : rows) {
    out += csv::join_row({r.article.title, r.article.category, std::to_string(r.window_index),
                          std::to_string(r.n_nodes), std::to_string(r.n_edges), csv::format_number(r.avg_degree),
                          csv::format_number(r.avg_clustering), csv::format_number(r.avg_shortest_path),
                          csv::format_number(r.betweenness_centralization), std::to_string(r.age_months),
                          csv::format_number(r.edge_retention)});
  }
  return out;
}

inline std::vector<MetricsRow> read_metrics_csv(std::string_view text) {
  auto table = csv::parse(text);
  if (table.empty() || table[0] != metrics_header()) throw Error(Errc::parse, "metrics CSV header does not match");
  auto num = [](const std::string& s, std::size_t line) {
    double v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
      throw Error(Errc::parse, "metrics CSV line " + std::to_string(line) + ": bad number '" + s + "'");
    return v;
  };
  auto count = [&](const std::string& s, std::size_t line) {
    double v = num(s, line);
    if (v < 0 || v != static_cast<double>(static_cast<long long>(v)))
      throw Error(Errc::parse, "metrics CSV line " + std::to_string(line) + ": bad count '" + s + "'");
    return static_cast<long long>(v);
  };
  std::vector<MetricsRow> rows;
  for (std::size_t k = 1; k < table.size(); ++k) {
    const auto& f = table[k];
    if (f.size() != metrics_header().size())
      throw Error(Errc::parse, "metrics CSV line " + std::to_string(k + 1) + ": wrong column count");
    MetricsRow r;
    r.article = {f[0], f[1]};
    r.window_index = static_cast<std::size_t>(count(f[2], k + 1));
    r.n_nodes = static_cast<std::size_t>(count(f[3], k + 1));
    r.n_edges = static_cast<std::size_t>(count(f[4], k + 1));
    r.avg_degree = num(f[5], k + 1);
    r.avg_clustering = num(f[6], k + 1);
    r.avg_shortest_path = num(f[7], k + 1);
    r.betweenness_centralization = num(f[8], k + 1);
    r.age_months = count(f[9], k + 1);
    r.edge_retention = num(f[10], k + 1);
    rows.push_back(std::move(r));
  }
  return rows;
}

/// Per-category network counts, date span and GCC size range.
inline std::string emit_summary(std::span<const NetworkSnapshot> snapshots) {
  struct Acc {
    std::set<std::string> topics;
    std::size_t networks = 0;
    Timestamp min_start = Timestamp::max();
    Timestamp max_end = Timestamp::min();
    std::size_t min_nodes = static_cast<std::size_t>(-1);
    std::size_t max_nodes = 0;
  };
  std::map<std::string, Acc> by_category;
  for (const auto& s : snapshots) {
    auto& a = by_category[s.article.category];
    a.topics.insert(s.article.title);
    ++a.networks;
    a.min_start = std::min(a.min_start, s.first_revision);
    a.max_end = std::max(a.max_end, s.last_revision);
    a.min_nodes = std::min(a.min_nodes, s.graph.node_count());
    a.max_nodes = std::max(a.max_nodes, s.graph.node_count());
  }
  std::string out = csv::join_row({"category", "topics", "networks", "min_start_date", "max_end_date", "min_nodes", "max_nodes"});
  for (const auto& [category, a] : by_category) {
    out += csv::join_row({category, std::to_string(a.topics.size()), std::to_string(a.networks),
                          format_timestamp(a.min_start), format_timestamp(a.max_end), std::to_string(a.min_nodes),
                          std::to_string(a.max_nodes)});
  }
  return out;
}

/// One line of a regression table; `fit` is empty when the fit failed.
struct TableEntry {
  Predictor predictor;
  Response response;
  std::string category;
  std::optional<RegressionResult> fit;
  std::string status;  // "ok" or the error code
};

/// All (metric x category) quadratic fits for one predictor, metrics in
/// fixed order and categories sorted.
inline std::vector<TableEntry> regression_table(std::span<const MetricsRow> rows, Predictor predictor) {
  std::set<std::string> categories;
  for (const auto& r : rows) categories.insert(r.article.category);
  std::vector<TableEntry> out;
  for (auto response : kAllResponses) {
    for (const auto& category : categories) {
      TableEntry e{predictor, response, category, std::nullopt, "ok"};
      try {
        e.fit = run_table(rows, {predictor, response, category});
      } catch (const Error& err) {
        e.status = to_string(err.code());
      }
      out.push_back(std::move(e));
    }
  }
  return out;
}

inline std::string write_regression_csv(std::span<const TableEntry> table) {
  std::string out = csv::join_row({"model", "category", "n_obs", "linear_p", "quadratic_p", "f_prob", "adj_r_squared",
                                   "linear_p_display", "quadratic_p_display", "f_prob_display", "beta0", "beta1",
                                   "beta2", "r_squared", "status"});
  for (const auto& e : table) {
    std::vector<std::string> f{model_label(e.predictor, e.response), e.category};
    if (e.fit) {
      const auto& r = *e.fit;
      f.insert(f.end(), {std::to_string(r.n_obs), csv::format_number(r.p_values[1]), csv::format_number(r.p_values[2]),
                         csv::format_number(r.f_prob), csv::format_number(r.adj_r_squared),
                         format_p_value(r.p_values[1]), format_p_value(r.p_values[2]), format_p_value(r.f_prob),
                         csv::format_number(r.coefficients[0]), csv::format_number(r.coefficients[1]),
                         csv::format_number(r.coefficients[2]), csv::format_number(r.r_squared), e.status});
    } else {
      f.insert(f.end(), {"", "", "", "", "", "", "", "", "", "", "", "", e.status});
    }
    out += csv::join_row(f);
  }
  return out;
}

inline std::string_view sign_label(const std::optional<RegressionResult>& fit, std::size_t coef) {
  if (!fit) return "na";
  double b = fit->coefficients[coef];
  return b > 0 ? "+" : (b < 0 ? "-" : "0");
}

/// Sign agreement of the linear and quadratic coefficients between a
/// primary run and a re-run at a different interaction threshold.
inline std::string write_robustness_csv(std::span<const TableEntry> primary, std::span<const TableEntry> alternate) {
  std::map<std::tuple<int, int, std::string>, const TableEntry*> alt;
  for (const auto& e : alternate) alt[{static_cast<int>(e.predictor), static_cast<int>(e.response), e.category}] = &e;

  std::string out = csv::join_row({"model", "category", "beta1_primary", "beta1_alternate", "beta1_agree",
                                   "beta2_primary", "beta2_alternate", "beta2_agree"});
  auto agree = [](std::string_view a, std::string_view b) -> std::string {
    if (a == "na" || b == "na") return "na";
    return a == b ? "yes" : "no";
  };
  std::optional<RegressionResult> none;
  for (const auto& e : primary) {
    auto it = alt.find({static_cast<int>(e.predictor), static_cast<int>(e.response), e.category});
    const auto& other = it == alt.end() ? none : it->second->fit;
    auto p1 = sign_label(e.fit, 1), a1 = sign_label(other, 1);
    auto p2 = sign_label(e.fit, 2), a2 = sign_label(other, 2);
    out += csv::join_row({model_label(e.predictor, e.response), e.category, std::string(p1), std::string(a1), agree(p1, a1),
                          std::string(p2), std::string(a2), agree(p2, a2)});
  }
  return out;
}

}  // namespace cocreate
