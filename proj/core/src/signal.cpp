#include "eegdep/signal.hpp"

#include <cmath>

#include "eegdep/errors.hpp"

namespace eegdep {

const char* label_name(Label label) { return label == Label::MDD ? "MDD" : "NC"; }

Label parse_label(const std::string& text) {
  if (text == "MDD") return Label::MDD;
  if (text == "NC") return Label::NC;
  throw Error(ErrorCode::ParseError, "label must be MDD or NC, got '" + text + "'");
}

std::vector<Epoch> epoch_recording(const Recording& rec, double epoch_len_s, int count) {
  if (count < 0) throw Error(ErrorCode::ConfigError, "epoch count must be >= 0");
  const auto epoch_len = static_cast<std::size_t>(std::llround(epoch_len_s * rec.fs));
  if (epoch_len < 4) throw Error(ErrorCode::ConfigError, "epoch length must be >= 4 samples");

  const std::size_t needed = epoch_len * static_cast<std::size_t>(count);
  if (rec.n_samples() < needed) {
    throw Error(ErrorCode::InsufficientData,
                "recording for subject " + rec.subject_id + " holds " +
                    std::to_string(rec.n_samples()) + " samples per channel, needs " +
                    std::to_string(needed));
  }

  std::vector<Epoch> epochs;
  epochs.reserve(static_cast<std::size_t>(count));
  for (int e = 0; e < count; ++e) {
    Epoch ep;
    ep.subject_id = rec.subject_id;
    ep.label = rec.label;
    ep.fs = rec.fs;
    ep.epoch_index = e;
    ep.samples.resize(rec.n_channels());
    const std::size_t start = static_cast<std::size_t>(e) * epoch_len;
    for (std::size_t ch = 0; ch < rec.n_channels(); ++ch) {
      const auto& src = rec.samples[ch];
      ep.samples[ch].assign(src.begin() + static_cast<std::ptrdiff_t>(start),
                            src.begin() + static_cast<std::ptrdiff_t>(start + epoch_len));
    }
    epochs.push_back(std::move(ep));
  }
  return epochs;
}

}  // namespace eegdep
