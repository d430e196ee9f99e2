#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <nlohmann/json_fwd.hpp>
#include <string>
#include <vector>

#include "eegdep/feature_table.hpp"

namespace eegdep {

enum class SelectorKind { None, CfsGsw, InfoGain, ReliefF };

const char* selector_name(SelectorKind kind);           // "None", "CFS-GSW", ...
SelectorKind parse_selector(const std::string& text);   // case-insensitive, ConfigError

struct SelectionConfig {
  int top_n{18};        // ranker cut-off; ignored by CFS (subset sizes itself)
  int relieff_k{10};    // neighbors per class
  int relieff_m{-1};    // sampled instances; -1 = every row in order
  std::uint64_t seed{1};
};

struct ScoredFeature {
  std::string name;
  double score{0.0};
};

struct SelectionResult {
  std::string method;
  int n_selected{0};
  std::vector<ScoredFeature> ranked;  // score-descending, name tie-break; CFS: addition order
  SelectionConfig config;

  // First n_selected ranked names.
  std::vector<std::string> selected() const;
};

void to_json(nlohmann::json& j, const SelectionResult& r);

// Pairwise symmetrical-uncertainty store for CFS. feature_feature entries
// start as NaN and are filled on demand; cfs_merit treats NaN as missing.
struct SuCache {
  std::vector<std::string> names;
  Eigen::VectorXd feature_class;
  Eigen::MatrixXd feature_feature;
};

// Discretizes every feature against the labels and fills the whole cache.
SuCache build_su_cache(const FeatureTable& table);

// Merit(S) = k * mean(SU(f, class)) / sqrt(k + k(k-1) * mean(SU(f, g))).
// Empty subset has merit 0. Throws MissingCorrelation on a NaN cache entry.
double cfs_merit(const std::vector<std::size_t>& subset, const SuCache& cache);

// Information-gain ranking over MDL-discretized features.
SelectionResult info_gain_rank(const FeatureTable& table, const SelectionConfig& cfg = {});

// ReliefF weights: per sampled row, subtract the averaged diff to the k
// nearest same-class rows and add the averaged diff to the k nearest
// other-class rows (binary classes, so the class-prior factor is 1).
SelectionResult relieff_rank(const FeatureTable& table, const SelectionConfig& cfg = {});

// Forward greedy subset search on cfs_merit; stops when no candidate strictly
// increases the merit. Scores are the merit recorded at each addition.
SelectionResult cfs_greedy_stepwise(const FeatureTable& table, const SelectionConfig& cfg = {});

// Dispatch by kind; None returns all features in table order with zero scores.
SelectionResult run_selector(SelectorKind kind, const FeatureTable& table,
                             const SelectionConfig& cfg = {});

}  // namespace eegdep
