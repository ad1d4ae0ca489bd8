#pragma once

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "cocreate/config.hpp"
#include "cocreate/error.hpp"
#include "cocreate/fixture.hpp"
#include "cocreate/graph_builder.hpp"
#include "cocreate/mediawiki.hpp"
#include "cocreate/net_metrics.hpp"
#include "cocreate/reports.hpp"
#include "cocreate/snapshot_io.hpp"
#include "cocreate/stopwords.hpp"

namespace cocreate {

/// Parameters of the per-article analysis (everything except acquisition).
struct AnalysisParams {
  AtiParams ati;
  double window_days = kDefaultWindowDays;
  double prune_fraction = 0.30;
  double active_fraction = 0.15;
  std::size_t min_nodes = 4;
  Timestamp horizon{};
};

struct ArticleOutcome {
  ArticleRef article;
  std::optional<std::string> error;
  Timestamp onset{};
  std::size_t windows_total = 0;
  std::size_t windows_empty = 0;      // no revisions or no edge survives
  std::size_t windows_pre_active = 0;
  std::size_t windows_too_small = 0;  // active, but below min_nodes
  std::vector<NetworkSnapshot> snapshots;  // every window GCC, `active` set
  std::vector<MetricsRow> rows;
};

/// Windows, weights, prunes, filters and measures one article's history.
inline ArticleOutcome analyze_article(const ArticleRef& article, std::span<const RevisionRecord> sorted_revisions,
                                      const AnalysisParams& params, const StopwordSet& stopwords) {
  ArticleOutcome out;
  out.article = article;
  auto until = std::lower_bound(sorted_revisions.begin(), sorted_revisions.end(), params.horizon,
                                [](const RevisionRecord& r, Timestamp t) { return r.timestamp < t; });
  std::span<const RevisionRecord> revs(sorted_revisions.begin(), until);
  if (revs.empty()) throw Error(Errc::no_collaboration, "no revisions before the horizon");

  out.onset = detect_onset(revs, params.ati);
  auto windows = partition_windows(out.onset, params.horizon, params.window_days);
  out.windows_total = windows.size();

  for (const auto& w : windows) {
    auto in_window = revisions_in(revs, w);
    if (in_window.empty()) {
      ++out.windows_empty;
      continue;
    }
    auto sections = window_sections(revs, w);
    auto graph = build_network(in_window, sections, params.ati, stopwords);
    auto pruned = prune_graph(graph, params.prune_fraction);
    if (pruned.empty()) {
      ++out.windows_empty;
      continue;
    }
    auto gcc = giant_component(pruned);
    NetworkSnapshot snap;
    snap.article = article;
    snap.window = w;
    snap.graph = std::move(gcc.graph);
    snap.age_months = artifact_age_months(out.onset, w.start);
    snap.edge_retention = gcc.edge_retention;
    snap.retention_flagged = gcc.edge_retention < 0.5 || gcc.edge_retention > 1.0;
    snap.pre_prune_edge_count = graph.edge_count();
    snap.section_count = sections.size();
    snap.first_revision = in_window.front().timestamp;
    snap.last_revision = in_window.back().timestamp;
    out.snapshots.push_back(std::move(snap));
  }

  auto active = filter_active_windows(out.snapshots, params.active_fraction);
  for (auto& s : out.snapshots) {
    s.active = std::any_of(active.begin(), active.end(),
                           [&](const NetworkSnapshot& a) { return a.window.index == s.window.index; });
    if (!s.active) {
      ++out.windows_pre_active;
      continue;
    }
    if (auto row = summarize_network(s, params.min_nodes)) out.rows.push_back(std::move(*row));
    else ++out.windows_too_small;
  }
  return out;
}

struct RunReport {
  std::size_t articles = 0;
  std::size_t articles_succeeded = 0;
  std::size_t windows_built = 0;     // GCC snapshots
  std::size_t windows_filtered = 0;  // pre-active
  std::size_t windows_too_small = 0;
  std::size_t rows_analyzed = 0;
  std::size_t regression_tables = 0;
  std::vector<std::string> failures;  // "title: reason", config order
  std::optional<std::filesystem::path> robustness_dir;

  bool ok() const { return articles_succeeded > 0; }
};

/// Filesystem-safe stem for an article title.
inline std::string article_slug(std::string_view title) {
  std::string out;
  for (unsigned char c : title) {
    bool keep = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-' || c == '.';
    out += keep ? static_cast<char>(c) : '_';
  }
  return out;
}

inline std::filesystem::path fixture_path_for(const PipelineConfig& cfg, const ArticleEntry& entry) {
  return *cfg.fixture_dir / (entry.fixture_file ? *entry.fixture_file : article_slug(entry.ref.title) + ".jsonl");
}

namespace detail {

inline void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io, "cannot write '" + path.string() + "'");
  out << bytes;
  if (!out) throw Error(Errc::io, "write failed for '" + path.string() + "'");
}

/// Runs `job(i)` for i in [0, count) on up to `workers` threads.
inline void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& job) {
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(count, 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) job(i);
    });
}

}  // namespace detail

using RevisionSource = std::variant<std::vector<RevisionRecord>, std::string>;  // records or failure reason

/// Loads (fixture mode) or fetches (live mode) every configured article.
inline std::vector<RevisionSource> acquire_revisions(const PipelineConfig& cfg) {
  std::vector<RevisionSource> out(cfg.articles.size());
  std::unique_ptr<MediaWikiClient> client;
  if (cfg.mode == RunMode::live) {
    FetchOptions opts;
    opts.page_limit = cfg.page_limit;
    opts.rate_delay = std::chrono::milliseconds(cfg.rate_limit_ms);
    opts.include_content = cfg.content_mode == ContentMode::full;
    client = std::make_unique<MediaWikiClient>(cfg.endpoint, opts);
  }
  detail::parallel_for(cfg.articles.size(), cfg.workers, [&](std::size_t i) {
    const auto& entry = cfg.articles[i];
    try {
      auto revs = cfg.mode == RunMode::live ? client->fetch_revisions(entry.ref, cfg.start, *cfg.horizon)
                                            : load_fixture(fixture_path_for(cfg, entry));
      exclude_editors(revs, cfg.exclude_editors);
      if (cfg.content_mode == ContentMode::markers)
        for (auto& r : revs) r.content.reset();
      out[i] = std::move(revs);
    } catch (const std::exception& e) {
      out[i] = std::string(e.what());
    }
  });
  return out;
}

inline AnalysisParams analysis_params(const PipelineConfig& cfg, double threshold_hours) {
  AnalysisParams p;
  p.ati.threshold_hours = threshold_hours;
  p.window_days = cfg.window_days;
  p.prune_fraction = cfg.prune_fraction;
  p.active_fraction = cfg.active_fraction;
  p.min_nodes = cfg.min_nodes;
  p.horizon = *cfg.horizon;
  return p;
}

struct AnalysisRun {
  RunReport report;
  std::vector<TableEntry> size_table;
  std::vector<TableEntry> age_table;
};

/// Analyses all acquired articles and writes the report files into `dir`.
inline AnalysisRun analyze_and_write(const PipelineConfig& cfg, const std::vector<RevisionSource>& sources,
                                     const StopwordSet& stopwords, double threshold_hours,
                                     const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  const auto params = analysis_params(cfg, threshold_hours);
  std::vector<std::variant<ArticleOutcome, std::string>> outcomes(sources.size());
  detail::parallel_for(sources.size(), cfg.workers, [&](std::size_t i) {
    if (auto* err = std::get_if<std::string>(&sources[i])) {
      outcomes[i] = *err;
      return;
    }
    try {
      outcomes[i] = analyze_article(cfg.articles[i].ref, std::get<std::vector<RevisionRecord>>(sources[i]), params, stopwords);
    } catch (const std::exception& e) {
      outcomes[i] = std::string(e.what());
    }
  });

  AnalysisRun run;
  auto& report = run.report;
  report.articles = cfg.articles.size();
  std::vector<MetricsRow> rows;
  std::vector<NetworkSnapshot> active;

  fs::create_directories(dir / "networks");
  for (const auto& entry : fs::directory_iterator(dir / "networks"))
    if (entry.path().extension() == ".tsv") fs::remove(entry.path());

  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (auto* err = std::get_if<std::string>(&outcomes[i])) {
      report.failures.push_back(cfg.articles[i].ref.title + ": " + *err);
      std::cerr << "article '" << cfg.articles[i].ref.title << "' skipped: " << *err << '\n';
      continue;
    }
    const auto& out = std::get<ArticleOutcome>(outcomes[i]);
    ++report.articles_succeeded;
    report.windows_built += out.snapshots.size();
    report.windows_filtered += out.windows_pre_active;
    report.windows_too_small += out.windows_too_small;
    rows.insert(rows.end(), out.rows.begin(), out.rows.end());
    for (const auto& s : out.snapshots) {
      char name[64];
      std::snprintf(name, sizeof name, "%03zu_", i);
      char suffix[32];
      std::snprintf(suffix, sizeof suffix, "_w%03zu.tsv", s.window.index);
      detail::write_file(dir / "networks" / (name + article_slug(s.article.title) + suffix), write_snapshot(s));
      if (s.active) active.push_back(s);
    }
  }
  report.rows_analyzed = rows.size();

  // Fit on the values as written so `regress metrics.csv` reproduces these tables.
  const auto metrics_text = write_metrics_csv(rows);
  rows = read_metrics_csv(metrics_text);
  run.size_table = regression_table(rows, Predictor::team_size);
  run.age_table = regression_table(rows, Predictor::artifact_age);
  report.regression_tables = 2;

  detail::write_file(dir / "metrics.csv", metrics_text);
  detail::write_file(dir / "regressions_size.csv", write_regression_csv(run.size_table));
  detail::write_file(dir / "regressions_age.csv", write_regression_csv(run.age_table));
  detail::write_file(dir / "summary.csv", emit_summary(active));

  std::string info;
  info += "mode=" + std::string(to_string(cfg.mode)) + "\n";
  info += "content_mode=" + std::string(to_string(cfg.content_mode)) + "\n";
  info += "threshold_hours=" + csv::format_number(threshold_hours) + "\n";
  info += "window_days=" + csv::format_number(cfg.window_days) + "\n";
  info += "prune_fraction=" + csv::format_number(cfg.prune_fraction) + "\n";
  info += "active_fraction=" + csv::format_number(cfg.active_fraction) + "\n";
  info += "active_filter_basis=gcc_nodes_after_prune\n";
  info += "section_count_source=latest_revision_with_headings_up_to_window_end\n";
  info += "min_nodes=" + std::to_string(cfg.min_nodes) + "\n";
  info += "start=" + format_timestamp(cfg.start) + "\n";
  info += "horizon=" + format_timestamp(*cfg.horizon) + "\n";
  info += "articles=" + std::to_string(report.articles) + "\n";
  info += "articles_succeeded=" + std::to_string(report.articles_succeeded) + "\n";
  info += "windows_built=" + std::to_string(report.windows_built) + "\n";
  info += "windows_filtered=" + std::to_string(report.windows_filtered) + "\n";
  info += "windows_too_small=" + std::to_string(report.windows_too_small) + "\n";
  info += "rows_analyzed=" + std::to_string(report.rows_analyzed) + "\n";
  for (const auto& f : report.failures) info += "failure=" + f + "\n";
  detail::write_file(dir / "run_report.txt", info);
  return run;
}

/// End-to-end run: acquire, weight, window, prune, filter, measure, regress.
/// With `robustness` set, the analysis is repeated at the alternate
/// threshold into `<output_dir>/robustness_<h>h/` and a sign-agreement
/// table is written to `<output_dir>/robustness.csv`.
inline RunReport run_pipeline(const PipelineConfig& cfg) {
  cfg.validate();
  const auto stopwords = cfg.stopword_path ? load_stopwords(*cfg.stopword_path) : default_stopwords();
  const auto sources = acquire_revisions(cfg);

  auto primary = analyze_and_write(cfg, sources, stopwords, cfg.threshold_hours, cfg.output_dir);
  if (cfg.robustness) {
    auto dir = cfg.output_dir / ("robustness_" + csv::format_number(cfg.robustness_threshold_hours) + "h");
    auto alternate = analyze_and_write(cfg, sources, stopwords, cfg.robustness_threshold_hours, dir);
    std::vector<TableEntry> p = primary.size_table, a = alternate.size_table;
    p.insert(p.end(), primary.age_table.begin(), primary.age_table.end());
    a.insert(a.end(), alternate.age_table.begin(), alternate.age_table.end());
    detail::write_file(cfg.output_dir / "robustness.csv", write_robustness_csv(p, a));
    primary.report.robustness_dir = dir;
  }
  return primary.report;
}

}  // namespace cocreate
