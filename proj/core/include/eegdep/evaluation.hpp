#pragma once

#include <cstdint>
#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <string>
#include <vector>

#include "eegdep/classifiers.hpp"
#include "eegdep/feature_table.hpp"
#include "eegdep/selection.hpp"

namespace eegdep {

enum class FeatureBlock { Linear, Nonlinear, Pli };

// Block membership by feature name: "pli:*" edges, linear stems, or
// nonlinear stems (before the '@'). Throws UnknownFeature.
FeatureBlock feature_block_of(const std::string& name);

struct FeatureSetSpec {
  std::string tag;                   // canonical: L, NL, L+NL, PLI, L+PLI, NL+PLI, All
  std::vector<std::string> columns;  // in table column order
};

// Canonical grid row order.
const std::vector<std::string>& feature_set_tags();

// Filters the table's columns down to the blocks named by the tag ("All"
// keeps every column). Tag tokens may come in any order, e.g. "PLI+L".
FeatureSetSpec resolve_feature_set(const std::string& tag,
                                   const std::vector<std::string>& table_columns);

struct ConfusionCounts {
  std::int64_t tp{0};  // MDD predicted MDD
  std::int64_t fn{0};
  std::int64_t tn{0};
  std::int64_t fp{0};

  std::int64_t total() const { return tp + fn + tn + fp; }
};

// Undefined ratios (zero denominator) stay unset rather than collapsing to 0.
struct Metrics {
  double accuracy{0.0};
  std::optional<double> sensitivity;
  std::optional<double> specificity;
};

Metrics metrics(const ConfusionCounts& counts);  // EmptyConfusion on all-zero

enum class SelectionScope { Fold, Global };

const char* selection_scope_name(SelectionScope scope);
SelectionScope parse_selection_scope(const std::string& text);

struct EvalConfig {
  SelectorKind selector{SelectorKind::None};
  SelectionConfig selection;
  SelectionScope scope{SelectionScope::Fold};
  ModelSpec model;
  NormalizationMode normalization{NormalizationMode::ZScore};
};

struct EpochPrediction {
  int epoch_index{0};
  Label truth{Label::NC};
  Label predicted{Label::NC};
  double score{0.0};
};

struct FoldResult {
  std::string subject_id;
  std::vector<std::string> selected_features;
  std::vector<EpochPrediction> predictions;
  // Fingerprint of the fold's standardization parameters and selected
  // feature list; leakage tests assert it ignores the held-out subject.
  std::uint64_t train_digest{0};
};

struct CvReport {
  std::string featureset_tag;
  std::string selector;
  std::string model;
  std::vector<FoldResult> folds;  // one per subject, in first-appearance order
  ConfusionCounts confusion;
  Metrics epoch_metrics;
  double subject_majority_accuracy{0.0};
  std::uint64_t config_digest{0};
};

void to_json(nlohmann::json& j, const CvReport& report);

// Leave-one-subject-out: per fold, standardization is fit on the training
// subjects only, the selector runs per fold or once globally, and every
// epoch of the held-out subject is predicted. MDD is the positive class.
CvReport loso_cv(const FeatureTable& table, const FeatureSetSpec& featureset,
                 const EvalConfig& cfg);

struct GridCell {
  std::string featureset;
  std::string selector;
  std::string model;
  bool ok{false};
  std::string error;  // failed cells are recorded, not fatal
  double epoch_accuracy{0.0};
  double subject_accuracy{0.0};
  double mean_selected{0.0};  // mean selected-feature count over folds
};

struct GridResult {
  std::vector<std::string> featureset_tags;
  std::vector<SelectorKind> selectors;
  std::vector<ModelSpec> models;
  std::vector<GridCell> cells;  // ordered by (featureset, selector, model)

  const GridCell& cell(std::size_t fs, std::size_t sel, std::size_t model) const;
};

GridResult grid_evaluate(const FeatureTable& table,
                         const std::vector<std::string>& featureset_tags,
                         const std::vector<SelectorKind>& selectors,
                         const std::vector<ModelSpec>& models, const EvalConfig& base,
                         int workers = 1);

// Rows = feature sets, columns = selectors, cell = mean +/- sd of epoch
// accuracy over the models; failed cells drop out of the aggregate.
std::string render_grid_csv(const GridResult& grid);
void to_json(nlohmann::json& j, const GridResult& grid);

struct FeatureStat {
  std::string name;
  double t{0.0};  // MDD minus NC, on per-subject epoch means
  double p{1.0};
  bool significant{false};
};

struct GroupStats {
  std::vector<FeatureStat> rows;  // table column order
  double alpha{0.05};
  double divisor{0.0};
};

// Welch two-sample t-test on per-subject feature means with Bonferroni
// threshold alpha/divisor; divisor 0 means the table's feature count.
GroupStats group_ttest(const FeatureTable& table, double alpha = 0.05,
                       int correction_divisor = 0);

std::string render_stats_csv(const GroupStats& stats);

struct EdgeCensus {
  std::vector<std::string> intra_left;
  std::vector<std::string> intra_right;
  std::vector<std::string> inter;
};

// Categorizes "pli:A-B" names by endpoint hemispheres.
EdgeCensus edge_census(const std::vector<std::string>& edges);
void to_json(nlohmann::json& j, const EdgeCensus& census);

// The "pli:*" subset of a name list, order preserved.
std::vector<std::string> filter_pli_names(const std::vector<std::string>& names);

}  // namespace eegdep
