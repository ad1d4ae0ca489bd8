#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cocreate/cocreate.hpp"

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw cocreate::Error(cocreate::Errc::io, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw cocreate::Error(cocreate::Errc::io, "cannot write '" + path.string() + "'");
  out << bytes;
}

int cmd_run(const fs::path& config_path, const std::map<std::string, std::string>& overrides,
            const std::vector<std::string>& extra_articles) {
  cocreate::PipelineConfig cfg;
  if (!config_path.empty()) cfg = cocreate::load_config(config_path);
  if (const char* env = std::getenv("COCREATE_ENDPOINT"); env && *env) cfg.endpoint = env;
  for (const auto& [key, value] : overrides) cfg.set(key, value);
  for (const auto& a : extra_articles) cfg.set("article", a);

  auto report = cocreate::run_pipeline(cfg);
  std::cout << "articles: " << report.articles_succeeded << "/" << report.articles << " succeeded\n"
            << "windows built: " << report.windows_built << "\n"
            << "windows filtered (pre-active): " << report.windows_filtered << "\n"
            << "windows below size floor: " << report.windows_too_small << "\n"
            << "rows analyzed: " << report.rows_analyzed << "\n"
            << "regression tables: " << report.regression_tables << "\n";
  if (report.robustness_dir) std::cout << "robustness run: " << report.robustness_dir->string() << "\n";
  std::cout << "output: " << cfg.output_dir.string() << "\n";
  return report.ok() ? 0 : 1;
}

int cmd_metrics(const fs::path& networks, const fs::path& out_path, std::size_t min_nodes) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(networks))
    if (entry.path().extension() == ".tsv") files.push_back(entry.path());
  std::sort(files.begin(), files.end());

  std::vector<cocreate::MetricsRow> rows;
  std::size_t skipped = 0;
  for (const auto& f : files) {
    cocreate::NetworkSnapshot snap;
    try {
      snap = cocreate::read_snapshot(read_file(f));
    } catch (const cocreate::Error& e) {
      throw cocreate::Error(e.code(), f.string() + ": " + e.what());
    }
    if (!snap.active) continue;
    if (auto row = cocreate::summarize_network(snap, min_nodes)) rows.push_back(std::move(*row));
    else ++skipped;
  }
  write_file(out_path, cocreate::write_metrics_csv(rows));
  std::cout << rows.size() << " rows written, " << skipped << " networks below size floor\n";
  return 0;
}

int cmd_regress(const fs::path& metrics_path, const fs::path& out_dir) {
  auto rows = cocreate::read_metrics_csv(read_file(metrics_path));
  fs::create_directories(out_dir);
  auto size_table = cocreate::regression_table(rows, cocreate::Predictor::team_size);
  auto age_table = cocreate::regression_table(rows, cocreate::Predictor::artifact_age);
  write_file(out_dir / "regressions_size.csv", cocreate::write_regression_csv(size_table));
  write_file(out_dir / "regressions_age.csv", cocreate::write_regression_csv(age_table));
  std::cout << rows.size() << " rows, " << size_table.size() + age_table.size() << " fits\n";
  return 0;
}

int cmd_validate(const std::vector<fs::path>& paths) {
  int failures = 0;
  for (const auto& p : paths) {
    try {
      auto revs = cocreate::load_fixture(p);
      std::cout << p.string() << ": ok, " << revs.size() << " revisions\n";
    } catch (const cocreate::Error& e) {
      std::cout << p.string() << ": " << e.what() << "\n";
      ++failures;
    }
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Co-creation network construction and analysis"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run the full pipeline from a config file");
  fs::path config_path;
  run->add_option("-c,--config", config_path, "key = value config file");
  std::map<std::string, std::string> overrides;
  std::vector<std::string> extra_articles;
  for (const auto& key : cocreate::config_keys()) {
    if (key == "article") {
      run->add_option("--article", extra_articles, "Additional 'category | title [| fixture]' entry");
      continue;
    }
    run->add_option_function<std::string>(
        "--" + key, [&overrides, key](const std::string& v) { overrides[key] = v; }, "Override '" + key + "'");
  }

  auto* metrics = app.add_subcommand("metrics", "Compute metrics.csv from a networks/ directory");
  fs::path networks_dir, metrics_out = "metrics.csv";
  std::size_t min_nodes = 4;
  metrics->add_option("--networks", networks_dir, "Directory of snapshot edge lists")->required();
  metrics->add_option("-o,--out", metrics_out, "Output CSV path");
  metrics->add_option("--min_nodes", min_nodes, "Minimum GCC size analysed");

  auto* regress = app.add_subcommand("regress", "Fit the size and age regression tables from metrics.csv");
  fs::path metrics_in, regress_out = ".";
  regress->add_option("--metrics", metrics_in, "metrics.csv produced by run or metrics")->required();
  regress->add_option("-o,--out_dir", regress_out, "Directory for regressions_size.csv and regressions_age.csv");

  auto* fixtures = app.add_subcommand("fixtures", "Fixture utilities");
  fixtures->require_subcommand(1);
  auto* validate = fixtures->add_subcommand("validate", "Check fixture files parse cleanly");
  std::vector<fs::path> fixture_paths;
  validate->add_option("paths", fixture_paths, "Fixture files")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config_path, overrides, extra_articles);
    if (*metrics) return cmd_metrics(networks_dir, metrics_out, min_nodes);
    if (*regress) return cmd_regress(metrics_in, regress_out);
    if (*validate) return cmd_validate(fixture_paths);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
