// Pipeline driver: each subcommand runs one stage against a shared JSON
// config, so a full run is a pure function of (config, seed).
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "eegdep/connectivity.hpp"
#include "eegdep/csv_io.hpp"
#include "eegdep/dataset.hpp"
#include "eegdep/digest.hpp"
#include "eegdep/errors.hpp"
#include "eegdep/evaluation.hpp"
#include "eegdep/pipeline.hpp"
#include "eegdep/selection.hpp"

namespace {

using eegdep::Error;
using eegdep::ErrorCode;

struct CliArgs {
  std::string config_path;
  std::string features_path;
  std::string dataset_path;
  std::uint64_t seed{0};
  bool seed_given{false};
  std::string out_dir;
  int workers{0};
};

eegdep::PipelineConfig load_config(const CliArgs& args) {
  eegdep::PipelineConfig cfg;
  if (!args.config_path.empty()) {
    std::ifstream in(args.config_path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open config: " + args.config_path);
    try {
      cfg = nlohmann::json::parse(in).get<eegdep::PipelineConfig>();
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::ConfigError, args.config_path + ": " + e.what());
    }
  }
  if (args.seed_given) {
    if (cfg.synth) cfg.synth->seed = args.seed;
    cfg.selection.seed = args.seed;
  }
  if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
  if (args.workers > 0) cfg.workers = args.workers;
  if (!args.dataset_path.empty()) {
    cfg.dataset_path = args.dataset_path;
    cfg.synth.reset();
  }
  return cfg;
}

std::filesystem::path prepare_out_dir(const eegdep::PipelineConfig& cfg) {
  std::filesystem::path dir(cfg.out_dir.empty() ? "." : cfg.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir.string() + ": " + ec.message());
  return dir;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open for write: " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "write failed: " + path.string());
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  write_text(path, j.dump(2) + "\n");
}

// CSV artifacts keep their exact tabular schema; their provenance lives in a
// sidecar instead.
void write_csv_sidecar(const std::filesystem::path& csv_path, const std::string& command,
                       const eegdep::PipelineConfig& cfg) {
  nlohmann::json meta{{"schema_version", 1},
                      {"tool_version", eegdep::tool_version()},
                      {"command", command},
                      {"artifact", csv_path.filename().string()},
                      {"config_digest", eegdep::hex64(eegdep::pipeline_config_digest(cfg))}};
  write_json(csv_path.string() + ".meta.json", meta);
}

void stamp(nlohmann::json& j, const eegdep::PipelineConfig& cfg) {
  j["schema_version"] = 1;
  j["tool_version"] = eegdep::tool_version();
  j["pipeline_config_digest"] = eegdep::hex64(eegdep::pipeline_config_digest(cfg));
}

eegdep::FeatureTable load_features(const CliArgs& args) {
  if (args.features_path.empty()) {
    throw Error(ErrorCode::ConfigError, "this command needs --features <feature CSV>");
  }
  return eegdep::load_feature_csv(args.features_path);
}

int cmd_synth(const CliArgs& args) {
  const auto cfg = load_config(args);
  if (!cfg.synth) {
    throw Error(ErrorCode::ConfigError, "synth needs a \"synth\" section in the config");
  }
  const auto dir = prepare_out_dir(cfg);
  const eegdep::Dataset ds = eegdep::synth_dataset(*cfg.synth);
  const auto csv = dir / "dataset.csv";
  eegdep::write_dataset_csv(ds, csv.string());
  write_csv_sidecar(csv, "synth", cfg);
  std::cout << csv.string() << "\n";
  return 0;
}

int cmd_extract(const CliArgs& args) {
  const auto cfg = load_config(args);
  const auto dir = prepare_out_dir(cfg);
  const eegdep::Dataset ds = eegdep::resolve_dataset(cfg);
  const eegdep::FeatureTable table =
      eegdep::extract_feature_table(ds, cfg.extract, cfg.workers);
  const auto csv = dir / "features.csv";
  eegdep::write_feature_csv(table, csv.string());
  write_csv_sidecar(csv, "extract", cfg);
  std::cout << csv.string() << "\n";
  return 0;
}

int cmd_select(const CliArgs& args) {
  const auto cfg = load_config(args);
  const auto dir = prepare_out_dir(cfg);
  const eegdep::FeatureTable table = load_features(args);
  const auto spec = eegdep::resolve_feature_set(cfg.featureset, table.feature_names);
  const auto sub = table.select_columns(spec.columns);
  const auto result = eegdep::run_selector(cfg.selector, sub, cfg.selection);
  nlohmann::json j = result;
  j["featureset"] = spec.tag;
  stamp(j, cfg);
  const auto path = dir / "selection.json";
  write_json(path, j);
  std::cout << path.string() << "\n";
  return 0;
}

int cmd_eval(const CliArgs& args) {
  const auto cfg = load_config(args);
  const auto dir = prepare_out_dir(cfg);
  const eegdep::FeatureTable table = load_features(args);
  const auto spec = eegdep::resolve_feature_set(cfg.featureset, table.feature_names);
  const auto report = eegdep::loso_cv(table, spec, eegdep::eval_config(cfg));
  nlohmann::json j = report;
  stamp(j, cfg);
  const auto path = dir / "cv_report.json";
  write_json(path, j);
  std::cout << path.string() << "\n";
  return 0;
}

int cmd_grid(const CliArgs& args) {
  const auto cfg = load_config(args);
  const auto dir = prepare_out_dir(cfg);
  const eegdep::FeatureTable table = load_features(args);
  const auto models = cfg.models.empty() ? eegdep::default_grid_models() : cfg.models;
  const std::vector<eegdep::SelectorKind> selectors = {
      eegdep::SelectorKind::None, eegdep::SelectorKind::CfsGsw,
      eegdep::SelectorKind::InfoGain, eegdep::SelectorKind::ReliefF};

  eegdep::EvalConfig base;
  base.selection = cfg.selection;
  base.scope = cfg.scope;
  base.normalization = cfg.normalization;

  const auto grid = eegdep::grid_evaluate(table, eegdep::feature_set_tags(), selectors,
                                          models, base, cfg.workers);
  const auto csv = dir / "grid.csv";
  write_text(csv, eegdep::render_grid_csv(grid));
  write_csv_sidecar(csv, "grid", cfg);
  nlohmann::json j = grid;
  stamp(j, cfg);
  const auto json_path = dir / "grid.json";
  write_json(json_path, j);
  std::cout << csv.string() << "\n" << json_path.string() << "\n";
  return 0;
}

int cmd_stats(const CliArgs& args) {
  const auto cfg = load_config(args);
  const auto dir = prepare_out_dir(cfg);
  const eegdep::FeatureTable table = load_features(args);
  const auto stats = eegdep::group_ttest(table, cfg.alpha, cfg.bonferroni_divisor);
  const auto csv = dir / "stats.csv";
  write_text(csv, eegdep::render_stats_csv(stats));
  write_csv_sidecar(csv, "stats", cfg);

  std::vector<std::string> significant;
  for (const auto& row : stats.rows) {
    if (row.significant && row.name.rfind("pli:", 0) == 0) significant.push_back(row.name);
  }
  nlohmann::json all_census;
  to_json(all_census, eegdep::edge_census(eegdep::filter_pli_names(table.feature_names)));
  nlohmann::json sig_census;
  to_json(sig_census, eegdep::edge_census(significant));
  nlohmann::json j{{"alpha", stats.alpha},
                   {"bonferroni_divisor", stats.divisor},
                   {"all_edges", std::move(all_census)},
                   {"significant_edges", std::move(sig_census)}};
  stamp(j, cfg);
  const auto json_path = dir / "edges.json";
  write_json(json_path, j);
  std::cout << csv.string() << "\n" << json_path.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"EEG depression-recognition pipeline"};
  app.require_subcommand(1);

  CliArgs args;
  app.add_option("--config", args.config_path, "pipeline config JSON");
  auto* seed_opt = app.add_option("--seed", args.seed, "override every configured seed");
  app.add_option("--out", args.out_dir, "output directory (overrides config)");
  app.add_option("--workers", args.workers, "worker threads (overrides config)");

  auto* synth = app.add_subcommand("synth", "generate a synthetic dataset CSV");
  auto* extract = app.add_subcommand("extract", "extract the feature matrix from a dataset");
  extract->add_option("--dataset", args.dataset_path, "epoch CSV (overrides config source)");
  auto* select = app.add_subcommand("select", "rank features on a feature CSV");
  auto* eval = app.add_subcommand("eval", "leave-one-subject-out evaluation");
  auto* grid = app.add_subcommand("grid", "feature-set x selector x model grid");
  auto* stats = app.add_subcommand("stats", "group t-tests and edge census");
  for (auto* sub : {select, eval, grid, stats}) {
    sub->add_option("--features", args.features_path, "feature-matrix CSV");
  }
  for (auto* sub : {synth, extract, select, eval, grid, stats}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  args.seed_given = seed_opt->count() > 0;

  try {
    if (app.got_subcommand(synth)) return cmd_synth(args);
    if (app.got_subcommand(extract)) return cmd_extract(args);
    if (app.got_subcommand(select)) return cmd_select(args);
    if (app.got_subcommand(eval)) return cmd_eval(args);
    if (app.got_subcommand(grid)) return cmd_grid(args);
    if (app.got_subcommand(stats)) return cmd_stats(args);
  } catch (const Error& e) {
    nlohmann::json report{{"error",
                           {{"code", eegdep::error_code_name(e.code())},
                            {"message", e.raw_message()}}}};
    std::cerr << report.dump(2) << "\n";
    switch (e.category()) {
      case eegdep::ErrorCategory::Config: return 2;
      case eegdep::ErrorCategory::Data: return 3;
      case eegdep::ErrorCategory::Numeric: return 4;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
