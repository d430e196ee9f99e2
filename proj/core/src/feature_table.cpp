#include "eegdep/feature_table.hpp"

#include <algorithm>
#include <cmath>

#include "eegdep/errors.hpp"

namespace eegdep {

Eigen::Index FeatureTable::column_index(const std::string& name) const {
  auto it = std::find(feature_names.begin(), feature_names.end(), name);
  if (it == feature_names.end()) {
    throw Error(ErrorCode::UnknownFeature, "no feature named '" + name + "'");
  }
  return static_cast<Eigen::Index>(it - feature_names.begin());
}

FeatureTable FeatureTable::select_columns(const std::vector<std::string>& names) const {
  FeatureTable out;
  out.feature_names = names;
  out.subject_ids = subject_ids;
  out.labels = labels;
  out.epoch_indices = epoch_indices;
  out.values.resize(values.rows(), static_cast<Eigen::Index>(names.size()));
  for (std::size_t j = 0; j < names.size(); ++j) {
    out.values.col(static_cast<Eigen::Index>(j)) = values.col(column_index(names[j]));
  }
  return out;
}

FeatureTable FeatureTable::select_rows(const std::vector<Eigen::Index>& rows) const {
  FeatureTable out;
  out.feature_names = feature_names;
  out.values.resize(static_cast<Eigen::Index>(rows.size()), values.cols());
  out.subject_ids.reserve(rows.size());
  out.labels.reserve(rows.size());
  out.epoch_indices.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Eigen::Index r = rows[i];
    out.values.row(static_cast<Eigen::Index>(i)) = values.row(r);
    out.subject_ids.push_back(subject_ids[static_cast<std::size_t>(r)]);
    out.labels.push_back(labels[static_cast<std::size_t>(r)]);
    out.epoch_indices.push_back(epoch_indices[static_cast<std::size_t>(r)]);
  }
  return out;
}

std::vector<std::string> FeatureTable::subjects() const {
  std::vector<std::string> out;
  for (const auto& s : subject_ids) {
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
  }
  return out;
}

StandardizationParams standardize_fit(const Eigen::MatrixXd& train, NormalizationMode mode) {
  if (train.rows() == 0) {
    throw Error(ErrorCode::InsufficientData, "cannot fit normalization on an empty matrix");
  }
  StandardizationParams p;
  p.offset.resize(train.cols());
  p.scale.resize(train.cols());
  const auto n = static_cast<double>(train.rows());
  for (Eigen::Index j = 0; j < train.cols(); ++j) {
    const auto col = train.col(j);
    if (mode == NormalizationMode::ZScore) {
      const double mean = col.mean();
      // Sample standard deviation (n-1); a single row fits scale 0.
      double sd = 0.0;
      if (train.rows() > 1) {
        sd = std::sqrt((col.array() - mean).square().sum() / (n - 1.0));
      }
      p.offset[j] = mean;
      p.scale[j] = sd;
    } else {
      const double lo = col.minCoeff();
      const double hi = col.maxCoeff();
      p.offset[j] = 0.5 * (hi + lo);
      p.scale[j] = 0.5 * (hi - lo);
    }
  }
  return p;
}

Eigen::MatrixXd standardize_apply(const StandardizationParams& params, const Eigen::MatrixXd& m) {
  if (m.cols() != params.arity()) {
    throw Error(ErrorCode::ArityMismatch,
                "matrix has " + std::to_string(m.cols()) + " columns, params expect " +
                    std::to_string(params.arity()));
  }
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    if (params.scale[j] == 0.0) {
      out.col(j).setZero();
    } else {
      out.col(j) = (m.col(j).array() - params.offset[j]) / params.scale[j];
    }
  }
  return out;
}

}  // namespace eegdep
