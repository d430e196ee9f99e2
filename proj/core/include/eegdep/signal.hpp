#pragma once

#include <string>
#include <vector>

#include "eegdep/channels.hpp"

namespace eegdep {

enum class Label { NC, MDD };

const char* label_name(Label label);
Label parse_label(const std::string& text);

// A continuous multichannel record for one subject. samples[ch][t], one row
// per layout channel.
struct Recording {
  std::string subject_id;
  Label label{Label::NC};
  double fs{250.0};
  std::vector<std::vector<double>> samples;

  std::size_t n_channels() const { return samples.size(); }
  std::size_t n_samples() const { return samples.empty() ? 0 : samples[0].size(); }
};

// A fixed-length segment treated as one classification sample.
struct Epoch {
  std::string subject_id;
  Label label{Label::NC};
  double fs{250.0};
  int epoch_index{0};
  std::vector<std::vector<double>> samples;

  std::size_t n_channels() const { return samples.size(); }
  std::size_t n_samples() const { return samples.empty() ? 0 : samples[0].size(); }
};

// Cut `count` non-overlapping consecutive epochs of epoch_len_s seconds from
// the start of the recording. Throws InsufficientData when the recording is
// too short.
std::vector<Epoch> epoch_recording(const Recording& rec, double epoch_len_s, int count);

}  // namespace eegdep
