#pragma once

#include <Eigen/Core>
#include <string>

#include "eegdep/channels.hpp"
#include "eegdep/dataset.hpp"
#include "eegdep/feature_table.hpp"

namespace eegdep {

// Shortest decimal form that parses back to the identical double.
std::string format_double(double v);

// Long-form epoch CSV, one row per sample:
//   subject_id,label,epoch_index,sample_index,<16 channel columns>
// Rows sorted by (subject_id, epoch_index, sample_index).
void write_dataset_csv(const Dataset& ds, const std::string& path);

// The schema carries no sampling rate, so the caller supplies fs.
Dataset load_epochs_csv(const std::string& path, double fs = 250.0);

// Feature-matrix CSV, one row per epoch:
//   subject_id,label,epoch_index,<feature name columns>
void write_feature_csv(const FeatureTable& table, const std::string& path);
FeatureTable load_feature_csv(const std::string& path);

// Square connectivity matrix with channel-name header row and column.
void write_connectivity_csv(const Eigen::MatrixXd& matrix, const ChannelLayout& layout,
                            const std::string& path);

}  // namespace eegdep
