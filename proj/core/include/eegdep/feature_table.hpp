#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "eegdep/signal.hpp"

namespace eegdep {

// Rows = epochs, columns = named features, with per-row subject grouping.
// This one table shape feeds selection, classification, and statistics.
struct FeatureTable {
  std::vector<std::string> feature_names;
  std::vector<std::string> subject_ids;  // one per row
  std::vector<Label> labels;             // one per row
  std::vector<int> epoch_indices;        // one per row
  Eigen::MatrixXd values;                // n_rows x n_features

  Eigen::Index n_rows() const { return values.rows(); }
  Eigen::Index n_features() const { return values.cols(); }

  // Columns by name, in the requested order. Throws UnknownFeature.
  FeatureTable select_columns(const std::vector<std::string>& names) const;

  // Rows by index, preserving order.
  FeatureTable select_rows(const std::vector<Eigen::Index>& rows) const;

  // Unique subject ids in first-appearance order.
  std::vector<std::string> subjects() const;

  Eigen::Index column_index(const std::string& name) const;  // throws UnknownFeature
};

enum class NormalizationMode { ZScore, MinMaxSymmetric };

// Per-column affine transform x -> (x - offset) / scale; columns with zero
// scale map to 0. For z-score: offset=mean, scale=sample std. For the
// min-max-to-[-1,1] mode: offset=(max+min)/2, scale=(max-min)/2.
struct StandardizationParams {
  Eigen::VectorXd offset;
  Eigen::VectorXd scale;

  Eigen::Index arity() const { return offset.size(); }
};

StandardizationParams standardize_fit(const Eigen::MatrixXd& train,
                                      NormalizationMode mode = NormalizationMode::ZScore);
Eigen::MatrixXd standardize_apply(const StandardizationParams& params, const Eigen::MatrixXd& m);

}  // namespace eegdep
