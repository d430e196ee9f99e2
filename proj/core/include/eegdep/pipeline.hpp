#pragma once

#include <cstdint>
#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <string>
#include <vector>

#include "eegdep/dataset.hpp"
#include "eegdep/evaluation.hpp"
#include "eegdep/feature_table.hpp"
#include "eegdep/univariate.hpp"

namespace eegdep {

const char* tool_version();

struct FilterConfig {
  double lo{1.0};
  double hi{40.0};
  int taps{251};
  bool enabled{true};
};

struct ExtractConfig {
  FilterConfig filter;
  UnivariateConfig univariate;
  double pli_trim{0.05};
  bool linear{true};
  bool nonlinear{true};
  bool pli{true};
};

void to_json(nlohmann::json& j, const FilterConfig& cfg);
void from_json(const nlohmann::json& j, FilterConfig& cfg);
void to_json(nlohmann::json& j, const UnivariateConfig& cfg);
void from_json(const nlohmann::json& j, UnivariateConfig& cfg);
void to_json(nlohmann::json& j, const ExtractConfig& cfg);
void from_json(const nlohmann::json& j, ExtractConfig& cfg);

const char* normalization_name(NormalizationMode mode);
NormalizationMode parse_normalization(const std::string& text);

// Column names the extraction below emits, in order: enabled blocks of
// linear, nonlinear, then PLI upper-triangle edges.
std::vector<std::string> extraction_columns(const ChannelLayout& layout,
                                            const ExtractConfig& cfg);

// Band-pass each epoch (when enabled), then collect the enabled feature
// blocks into one table. Rows follow dataset epoch order regardless of the
// worker count.
FeatureTable extract_feature_table(const Dataset& ds, const ExtractConfig& cfg,
                                   int workers = 1);

// One config file drives every pipeline stage; unused sections are ignored
// by stages that do not need them.
struct PipelineConfig {
  std::optional<SynthConfig> synth;  // exactly one of synth / dataset_path
  std::string dataset_path;
  double fs{250.0};  // sample rate for loaded CSV data

  ExtractConfig extract;

  SelectorKind selector{SelectorKind::ReliefF};
  SelectionConfig selection;
  SelectionScope scope{SelectionScope::Fold};
  std::string featureset{"All"};
  std::vector<ModelSpec> models;  // eval uses the first; grid uses all
  NormalizationMode normalization{NormalizationMode::ZScore};

  double alpha{0.05};
  int bonferroni_divisor{0};  // 0 means the tested table's feature count

  std::string out_dir{"."};
  int workers{1};
};

void to_json(nlohmann::json& j, const PipelineConfig& cfg);
void from_json(const nlohmann::json& j, PipelineConfig& cfg);

// Fingerprint of the canonical JSON form; embedded in every output file.
std::uint64_t pipeline_config_digest(const PipelineConfig& cfg);

// KNN, NB, DT, LR with default hyperparameters.
std::vector<ModelSpec> default_grid_models();

// Synthesizes or loads the configured dataset. ConfigError unless exactly
// one source is configured.
Dataset resolve_dataset(const PipelineConfig& cfg);

// The loso_cv / grid_evaluate settings carried by the pipeline config.
// ConfigError when models is empty.
EvalConfig eval_config(const PipelineConfig& cfg);

}  // namespace eegdep
