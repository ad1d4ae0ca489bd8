#pragma once

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "cocreate/error.hpp"
#include "cocreate/revision.hpp"
#include "cocreate/time_util.hpp"

namespace cocreate {

enum class RunMode { live, fixture };
enum class ContentMode { markers, full };

inline std::string_view to_string(RunMode m) { return m == RunMode::live ? "live" : "fixture"; }
inline std::string_view to_string(ContentMode m) { return m == ContentMode::full ? "full" : "markers"; }

struct ArticleEntry {
  ArticleRef ref;
  std::optional<std::string> fixture_file;  // relative to fixture_dir
};

/// Everything a run needs. Field names double as config keys and CLI flags.
struct PipelineConfig {
  std::vector<ArticleEntry> articles;
  std::vector<std::string> categories = default_categories();
  RunMode mode = RunMode::fixture;
  std::optional<std::filesystem::path> fixture_dir;
  std::string endpoint = "https://en.wikipedia.org/w/api.php";
  double threshold_hours = 48.0;
  double window_days = 182.625;
  double prune_fraction = 0.30;
  double active_fraction = 0.15;
  std::size_t min_nodes = 4;
  Timestamp start = *parse_timestamp("2001-01-15");
  std::optional<Timestamp> horizon;
  std::filesystem::path output_dir = "out";
  std::optional<std::filesystem::path> stopword_path;
  ContentMode content_mode = ContentMode::markers;
  std::vector<EditorId> exclude_editors;
  std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  int page_limit = 500;
  int rate_limit_ms = 200;
  bool robustness = false;
  double robustness_threshold_hours = 24.0;

  void validate() const {
    if (articles.empty()) throw Error(Errc::config, "no articles configured");
    for (const auto& a : articles) make_article(a.ref.title, a.ref.category, categories);
    if (mode == RunMode::fixture && !fixture_dir) throw Error(Errc::config, "fixture mode requires fixture_dir");
    if (!horizon) throw Error(Errc::config, "horizon is required");
    if (!(start < *horizon)) throw Error(Errc::config, "start must precede horizon");
    if (!(threshold_hours > 0.0)) throw Error(Errc::config, "threshold_hours must be positive");
    if (!(robustness_threshold_hours > 0.0)) throw Error(Errc::config, "robustness_threshold_hours must be positive");
    if (!(window_days > 0.0)) throw Error(Errc::config, "window_days must be positive");
    if (!(prune_fraction >= 0.0 && prune_fraction < 1.0)) throw Error(Errc::config, "prune_fraction must lie in [0, 1)");
    if (!(active_fraction >= 0.0 && active_fraction < 1.0)) throw Error(Errc::config, "active_fraction must lie in [0, 1)");
    if (min_nodes < 2) throw Error(Errc::config, "min_nodes must be at least 2");
    if (workers < 1) throw Error(Errc::config, "workers must be at least 1");
    if (page_limit < 1) throw Error(Errc::config, "page_limit must be positive");
    if (rate_limit_ms < 0) throw Error(Errc::config, "rate_limit_ms must be non-negative");
  }

  /// Applies one `key = value` setting. `article` appends; everything else overwrites.
  void set(std::string_view key, std::string_view raw) {
    const std::string value(trim(raw));
    auto fail = [&](const char* what) { return Error(Errc::config, std::string(key) + ": " + what + " '" + value + "'"); };
    auto number = [&]() {
      double v = 0;
      auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
      if (ec != std::errc{} || p != value.data() + value.size()) throw fail("not a number");
      return v;
    };
    auto integer = [&]() {
      long long v = 0;
      auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
      if (ec != std::errc{} || p != value.data() + value.size()) throw fail("not an integer");
      return v;
    };
    auto instant = [&]() {
      auto t = parse_timestamp(value);
      if (!t) throw fail("not an ISO-8601 UTC date");
      return *t;
    };
    auto boolean = [&]() {
      if (value == "true" || value == "1" || value == "yes") return true;
      if (value == "false" || value == "0" || value == "no") return false;
      throw fail("not a boolean");
    };
    auto split_list = [](std::string_view s, char sep) {
      std::vector<std::string> out;
      std::size_t pos = 0;
      while (pos <= s.size()) {
        auto next = s.find(sep, pos);
        auto item = trim(s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
        if (!item.empty()) out.emplace_back(item);
        if (next == std::string_view::npos) break;
        pos = next + 1;
      }
      return out;
    };

    if (key == "article") {
      auto parts = split_list(value, '|');
      if (parts.size() < 2 || parts.size() > 3) throw fail("expected 'category | title [| fixture file]'");
      ArticleEntry e;
      e.ref = {parts[1], parts[0]};
      if (parts.size() == 3) e.fixture_file = parts[2];
      articles.push_back(std::move(e));
    } else if (key == "categories") {
      categories = split_list(value, ',');
    } else if (key == "mode") {
      if (value == "live") mode = RunMode::live;
      else if (value == "fixture") mode = RunMode::fixture;
      else throw fail("expected live or fixture, got");
    } else if (key == "fixture_dir") {
      fixture_dir = value;
    } else if (key == "endpoint") {
      endpoint = value;
    } else if (key == "threshold_hours") {
      threshold_hours = number();
    } else if (key == "window_days") {
      window_days = number();
    } else if (key == "prune_fraction") {
      prune_fraction = number();
    } else if (key == "active_fraction") {
      active_fraction = number();
    } else if (key == "min_nodes") {
      auto v = integer();
      if (v < 0) throw fail("negative");
      min_nodes = static_cast<std::size_t>(v);
    } else if (key == "start") {
      start = instant();
    } else if (key == "horizon") {
      horizon = instant();
    } else if (key == "output_dir") {
      output_dir = value;
    } else if (key == "stopword_path") {
      stopword_path = value;
    } else if (key == "content_mode") {
      if (value == "markers") content_mode = ContentMode::markers;
      else if (value == "full") content_mode = ContentMode::full;
      else throw fail("expected markers or full, got");
    } else if (key == "exclude_editors") {
      exclude_editors.clear();
      for (const auto& e : split_list(value, ',')) exclude_editors.emplace_back(e);
    } else if (key == "workers") {
      auto v = integer();
      if (v < 1) throw fail("must be at least 1, got");
      workers = static_cast<std::size_t>(v);
    } else if (key == "page_limit") {
      page_limit = static_cast<int>(integer());
    } else if (key == "rate_limit_ms") {
      rate_limit_ms = static_cast<int>(integer());
    } else if (key == "robustness") {
      robustness = boolean();
    } else if (key == "robustness_threshold_hours") {
      robustness_threshold_hours = number();
    } else {
      throw Error(Errc::config, "unknown key '" + std::string(key) + "'");
    }
  }
};

/// Keys accepted by PipelineConfig::set, in documentation order.
inline const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "article",     "categories",   "mode",          "fixture_dir",     "endpoint",       "threshold_hours",
      "window_days", "prune_fraction", "active_fraction", "min_nodes",   "start",          "horizon",
      "output_dir",  "stopword_path", "content_mode",  "exclude_editors", "workers",        "page_limit",
      "rate_limit_ms", "robustness",  "robustness_threshold_hours"};
  return keys;
}

/// Parses flat `key = value` text; '#' starts a comment line.
inline PipelineConfig parse_config(std::string_view text, PipelineConfig base = {}) {
  std::size_t pos = 0, line_no = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    auto line = trim(text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos));
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw Error(Errc::config, "line " + std::to_string(line_no) + ": expected 'key = value'");
    try {
      base.set(trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const Error& e) {
      throw Error(Errc::config, "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return base;
}

inline PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open config '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace cocreate
