#include "eegdep/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <nlohmann/json.hpp>
#include <numbers>
#include <unordered_map>
#include <unordered_set>

#include "eegdep/digest.hpp"
#include "eegdep/errors.hpp"
#include "eegdep/rng.hpp"

namespace eegdep {

namespace {

constexpr double kNoiseRho = 0.5;     // AR(1) pole of the additive noise
constexpr double kCouplingLag = std::numbers::pi / 4.0;

void edges_to_json(nlohmann::json& j, const std::vector<CoupledEdge>& edges) {
  j = nlohmann::json::array();
  for (const auto& e : edges) {
    j.push_back({{"src", e.src}, {"dst", e.dst}, {"strength", e.strength}});
  }
}

std::vector<CoupledEdge> edges_from_json(const nlohmann::json& j) {
  std::vector<CoupledEdge> edges;
  for (const auto& item : j) {
    CoupledEdge e;
    e.src = item.at("src").get<std::string>();
    e.dst = item.at("dst").get<std::string>();
    e.strength = item.at("strength").get<double>();
    edges.push_back(std::move(e));
  }
  return edges;
}

void validate_edges(const std::vector<CoupledEdge>& edges, const ChannelLayout& layout,
                    const char* class_name) {
  std::unordered_map<std::string, double> inbound;
  for (const auto& e : edges) {
    if (!layout.index_of(e.src)) {
      throw Error(ErrorCode::UnknownChannel, std::string(class_name) + " edge source " + e.src);
    }
    if (!layout.index_of(e.dst)) {
      throw Error(ErrorCode::UnknownChannel, std::string(class_name) + " edge target " + e.dst);
    }
    if (e.src == e.dst) {
      throw Error(ErrorCode::ConfigError, std::string(class_name) + " self-coupling on " + e.src);
    }
    if (e.strength < 0.0 || e.strength > 1.0) {
      throw Error(ErrorCode::ConfigError, "coupling strength outside [0, 1] on edge " + e.src +
                                              "->" + e.dst);
    }
    inbound[e.dst] += e.strength;
  }
  for (const auto& [dst, total] : inbound) {
    if (total > 1.0 + 1e-12) {
      throw Error(ErrorCode::ConfigError,
                  "total inbound coupling exceeds 1 on channel " + dst);
    }
  }
}

void validate_config(const SynthConfig& cfg) {
  const auto& layout = ChannelLayout::canonical16();
  if (cfg.subjects_per_class < 1) {
    throw Error(ErrorCode::ConfigError, "subjects_per_class must be >= 1");
  }
  if (cfg.epochs_per_subject < 1) {
    throw Error(ErrorCode::ConfigError, "epochs_per_subject must be >= 1");
  }
  if (!(cfg.fs > 0.0)) throw Error(ErrorCode::ConfigError, "fs must be positive");
  if (!(cfg.epoch_len_s * cfg.fs >= 16.0)) {
    throw Error(ErrorCode::ConfigError, "epoch must span at least 16 samples");
  }
  if (!(cfg.base_freq > 0.0) || cfg.base_freq >= cfg.fs / 2.0) {
    throw Error(ErrorCode::ConfigError, "base_freq must lie in (0, fs/2)");
  }
  if (cfg.noise_sd < 0.0) throw Error(ErrorCode::ConfigError, "noise_sd must be >= 0");
  if (cfg.freq_wander_sd_hz < 0.0) {
    throw Error(ErrorCode::ConfigError, "freq_wander_sd_hz must be >= 0");
  }
  if (cfg.freq_halfwidth_hz < 0.0) {
    throw Error(ErrorCode::ConfigError, "freq_halfwidth_hz must be >= 0");
  }
  if (!(cfg.base_freq - cfg.freq_halfwidth_hz > 0.0) ||
      !(cfg.base_freq + cfg.freq_halfwidth_hz < cfg.fs / 2.0)) {
    throw Error(ErrorCode::ConfigError, "frequency band must lie inside (0, fs/2)");
  }
  validate_edges(cfg.coupling_nc, layout, "NC");
  validate_edges(cfg.coupling_mdd, layout, "MDD");
}

std::string subject_name(Label label, int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%02d", label_name(label), index + 1);
  return buf;
}

}  // namespace

void to_json(nlohmann::json& j, const SynthConfig& cfg) {
  nlohmann::json nc;
  nlohmann::json mdd;
  edges_to_json(nc, cfg.coupling_nc);
  edges_to_json(mdd, cfg.coupling_mdd);
  j = nlohmann::json{{"subjects_per_class", cfg.subjects_per_class},
                     {"epochs_per_subject", cfg.epochs_per_subject},
                     {"fs", cfg.fs},
                     {"epoch_len_s", cfg.epoch_len_s},
                     {"base_freq", cfg.base_freq},
                     {"noise_sd", cfg.noise_sd},
                     {"freq_halfwidth_hz", cfg.freq_halfwidth_hz},
                     {"freq_wander_sd_hz", cfg.freq_wander_sd_hz},
                     {"seed", cfg.seed},
                     {"coupling", {{"NC", nc}, {"MDD", mdd}}}};
}

void from_json(const nlohmann::json& j, SynthConfig& cfg) {
  SynthConfig out;
  try {
    out.subjects_per_class = j.value("subjects_per_class", out.subjects_per_class);
    out.epochs_per_subject = j.value("epochs_per_subject", out.epochs_per_subject);
    out.fs = j.value("fs", out.fs);
    out.epoch_len_s = j.value("epoch_len_s", out.epoch_len_s);
    out.base_freq = j.value("base_freq", out.base_freq);
    out.noise_sd = j.value("noise_sd", out.noise_sd);
    out.freq_halfwidth_hz = j.value("freq_halfwidth_hz", out.freq_halfwidth_hz);
    out.freq_wander_sd_hz = j.value("freq_wander_sd_hz", out.freq_wander_sd_hz);
    out.seed = j.value("seed", out.seed);
    if (j.contains("coupling")) {
      const auto& c = j.at("coupling");
      if (c.contains("NC")) out.coupling_nc = edges_from_json(c.at("NC"));
      if (c.contains("MDD")) out.coupling_mdd = edges_from_json(c.at("MDD"));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("bad synth config: ") + e.what());
  }
  cfg = std::move(out);
}

std::uint64_t synth_config_digest(const SynthConfig& cfg) {
  nlohmann::json j;
  to_json(j, cfg);
  return fnv1a64(j.dump());
}

std::vector<std::string> Dataset::subjects() const {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const auto& e : epochs) {
    if (seen.insert(e.subject_id).second) out.push_back(e.subject_id);
  }
  return out;
}

void validate_dataset(const Dataset& ds) {
  if (ds.epochs.empty()) throw Error(ErrorCode::InsufficientData, "dataset has no epochs");
  const double fs = ds.epochs.front().fs;
  const std::size_t nch = ds.epochs.front().n_channels();
  const std::size_t len = ds.epochs.front().n_samples();
  std::unordered_map<std::string, Label> subject_label;
  for (const auto& e : ds.epochs) {
    if (e.fs != fs) throw Error(ErrorCode::SchemaError, "mixed sampling rates in dataset");
    if (e.n_channels() != nch) {
      throw Error(ErrorCode::SchemaError, "mixed channel counts in dataset");
    }
    for (const auto& ch : e.samples) {
      if (ch.size() != len) {
        throw Error(ErrorCode::SchemaError,
                    "ragged epoch for subject " + e.subject_id + " epoch " +
                        std::to_string(e.epoch_index));
      }
    }
    auto [it, inserted] = subject_label.emplace(e.subject_id, e.label);
    if (!inserted && it->second != e.label) {
      throw Error(ErrorCode::SchemaError, "subject " + e.subject_id + " has mixed labels");
    }
  }
  if (ds.layout != nullptr && nch != ds.layout->size()) {
    throw Error(ErrorCode::SchemaError, "dataset channel count does not match layout");
  }
}

Dataset synth_dataset(const SynthConfig& cfg) {
  validate_config(cfg);
  const auto& layout = ChannelLayout::canonical16();
  const std::size_t nch = layout.size();
  const auto len = static_cast<std::size_t>(std::llround(cfg.fs * cfg.epoch_len_s));
  const double f_lo = cfg.base_freq - cfg.freq_halfwidth_hz;
  const double f_hi = cfg.base_freq + cfg.freq_halfwidth_hz;
  const double innovation_sd = cfg.noise_sd * std::sqrt(1.0 - kNoiseRho * kNoiseRho);

  struct Pull {
    std::size_t src;
    double strength;
  };
  auto build_pulls = [&](const std::vector<CoupledEdge>& edges) {
    std::vector<std::vector<Pull>> pulls(nch);
    for (const auto& e : edges) {
      pulls[*layout.index_of(e.dst)].push_back({*layout.index_of(e.src), e.strength});
    }
    return pulls;
  };
  const auto pulls_by_label = std::array{build_pulls(cfg.coupling_nc),
                                         build_pulls(cfg.coupling_mdd)};

  Rng rng(cfg.seed);
  Dataset ds;
  ds.layout = &layout;
  ds.provenance = {ProvenanceKind::Synthetic, "", cfg.seed, synth_config_digest(cfg)};
  ds.epochs.reserve(static_cast<std::size_t>(2 * cfg.subjects_per_class) *
                    static_cast<std::size_t>(cfg.epochs_per_subject));

  std::vector<std::vector<double>> phase(nch, std::vector<double>(len));
  std::vector<std::vector<double>> noise(nch, std::vector<double>(len));
  std::vector<std::size_t> strata(nch);
  const double stratum_w = (f_hi - f_lo) / static_cast<double>(nch);

  for (Label label : {Label::NC, Label::MDD}) {
    const auto& pulls = pulls_by_label[label == Label::NC ? 0 : 1];
    for (int s = 0; s < cfg.subjects_per_class; ++s) {
      const auto subject = subject_name(label, s);
      for (int ep = 0; ep < cfg.epochs_per_subject; ++ep) {
        // Start frequencies are a jittered random permutation of a lattice
        // over the band, so no two channels start closer than half a stratum
        // and uncoupled pairs always sweep relative cycles within the epoch.
        // Fixed draw order (strata, then per channel: offset, start jitter,
        // frequency walk, noise) keeps the stream layout parameter-free.
        for (std::size_t i = 0; i < nch; ++i) strata[i] = i;
        rng.shuffle(strata);
        for (std::size_t ch = 0; ch < nch; ++ch) {
          double phi = rng.uniform() * 2.0 * std::numbers::pi;
          double f = f_lo + (static_cast<double>(strata[ch]) + 0.25 + 0.5 * rng.uniform()) *
                                stratum_w;
          for (std::size_t t = 0; t < len; ++t) {
            phase[ch][t] = phi;
            phi += 2.0 * std::numbers::pi * f / cfg.fs;
            f += rng.normal() * cfg.freq_wander_sd_hz;
            if (f_hi > f_lo) {
              while (f < f_lo || f > f_hi) {
                f = f < f_lo ? 2.0 * f_lo - f : 2.0 * f_hi - f;
              }
            } else {
              f = f_lo;
            }
          }
          double n = rng.normal() * cfg.noise_sd;
          noise[ch][0] = n;
          for (std::size_t t = 1; t < len; ++t) {
            n = kNoiseRho * n + rng.normal() * innovation_sd;
            noise[ch][t] = n;
          }
        }

        Epoch epoch;
        epoch.subject_id = subject;
        epoch.label = label;
        epoch.fs = cfg.fs;
        epoch.epoch_index = ep;
        epoch.samples.assign(nch, std::vector<double>(len));
        for (std::size_t ch = 0; ch < nch; ++ch) {
          double own = 1.0;
          for (const auto& p : pulls[ch]) own -= p.strength;
          auto& out = epoch.samples[ch];
          for (std::size_t t = 0; t < len; ++t) {
            double v = own * std::sin(phase[ch][t]);
            for (const auto& p : pulls[ch]) {
              v += p.strength * std::sin(phase[p.src][t] - kCouplingLag);
            }
            out[t] = v + noise[ch][t];
          }
        }
        ds.epochs.push_back(std::move(epoch));
      }
    }
  }
  return ds;
}

}  // namespace eegdep
