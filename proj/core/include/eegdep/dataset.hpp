#pragma once

#include <cstdint>
#include <nlohmann/json_fwd.hpp>
#include <string>
#include <vector>

#include "eegdep/channels.hpp"
#include "eegdep/signal.hpp"

namespace eegdep {

// Directed phase coupling: dst's oscillator mixes in a pi/4-lagged copy of
// src's oscillator at the given strength.
struct CoupledEdge {
  std::string src;
  std::string dst;
  double strength{0.0};
};

struct SynthConfig {
  int subjects_per_class{2};
  int epochs_per_subject{40};
  double fs{250.0};
  double epoch_len_s{2.0};
  double base_freq{10.0};
  double noise_sd{1.0};
  // Each channel's instantaneous frequency performs a reflected random walk
  // inside [base_freq - freq_halfwidth_hz, base_freq + freq_halfwidth_hz].
  // The signal stays locally narrowband (stable analytic phase), while
  // independent channels sweep several relative cycles per epoch, so
  // uncoupled pairs decorrelate even without additive noise.
  double freq_halfwidth_hz{5.0};
  double freq_wander_sd_hz{0.05};
  std::uint64_t seed{1};
  std::vector<CoupledEdge> coupling_nc;
  std::vector<CoupledEdge> coupling_mdd;
};

void to_json(nlohmann::json& j, const SynthConfig& cfg);
void from_json(const nlohmann::json& j, SynthConfig& cfg);

// Stable fingerprint of the canonical JSON form.
std::uint64_t synth_config_digest(const SynthConfig& cfg);

enum class ProvenanceKind { File, Synthetic };

struct Provenance {
  ProvenanceKind kind{ProvenanceKind::Synthetic};
  std::string path;                // file provenance only
  std::uint64_t seed{0};           // synthetic only
  std::uint64_t config_digest{0};  // synthetic only
};

struct Dataset {
  std::vector<Epoch> epochs;
  const ChannelLayout* layout{&ChannelLayout::canonical16()};
  Provenance provenance;

  std::vector<std::string> subjects() const;  // first-appearance order
};

// Checks the dataset invariants: uniform fs, channel count, and epoch length;
// at least one epoch per subject; one label per subject.
void validate_dataset(const Dataset& ds);

// Deterministic generator. Each channel carries a unit sine at base_freq with
// a per-epoch random phase offset plus a per-sample phase random walk, on top
// of AR(1) noise with stationary sd = noise_sd. Coupled edges replace part of
// the target oscillator with a pi/4-lagged copy of the source oscillator, so
// the expected PLI of that edge rises monotonically with strength. The two
// classes differ only in their coupling strengths.
Dataset synth_dataset(const SynthConfig& cfg);

}  // namespace eegdep
