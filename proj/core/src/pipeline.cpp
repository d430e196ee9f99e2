#include "eegdep/pipeline.hpp"

#include <nlohmann/json.hpp>

#include "eegdep/connectivity.hpp"
#include "eegdep/csv_io.hpp"
#include "eegdep/digest.hpp"
#include "eegdep/errors.hpp"
#include "eegdep/fir.hpp"
#include "eegdep/parallel.hpp"

namespace eegdep {

const char* tool_version() { return "0.1.0"; }

void to_json(nlohmann::json& j, const FilterConfig& cfg) {
  j = nlohmann::json{
      {"lo", cfg.lo}, {"hi", cfg.hi}, {"taps", cfg.taps}, {"enabled", cfg.enabled}};
}

void from_json(const nlohmann::json& j, FilterConfig& cfg) {
  try {
    cfg.lo = j.value("lo", cfg.lo);
    cfg.hi = j.value("hi", cfg.hi);
    cfg.taps = j.value("taps", cfg.taps);
    cfg.enabled = j.value("enabled", cfg.enabled);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("filter config: ") + e.what());
  }
}

void to_json(nlohmann::json& j, const UnivariateConfig& cfg) {
  j = nlohmann::json{{"ar_order", cfg.ar_order},
                     {"grid_lo", cfg.grid_lo},
                     {"grid_hi", cfg.grid_hi},
                     {"grid_step", cfg.grid_step},
                     {"band_lo", cfg.band_lo},
                     {"band_hi", cfg.band_hi},
                     {"svd_m", cfg.svd_m},
                     {"svd_tau", cfg.svd_tau},
                     {"renyi_orders", cfg.renyi_orders},
                     {"renyi_bins", cfg.renyi_bins},
                     {"p2p_windows", cfg.p2p_windows}};
}

void from_json(const nlohmann::json& j, UnivariateConfig& cfg) {
  try {
    cfg.ar_order = j.value("ar_order", cfg.ar_order);
    cfg.grid_lo = j.value("grid_lo", cfg.grid_lo);
    cfg.grid_hi = j.value("grid_hi", cfg.grid_hi);
    cfg.grid_step = j.value("grid_step", cfg.grid_step);
    cfg.band_lo = j.value("band_lo", cfg.band_lo);
    cfg.band_hi = j.value("band_hi", cfg.band_hi);
    cfg.svd_m = j.value("svd_m", cfg.svd_m);
    cfg.svd_tau = j.value("svd_tau", cfg.svd_tau);
    cfg.renyi_orders = j.value("renyi_orders", cfg.renyi_orders);
    cfg.renyi_bins = j.value("renyi_bins", cfg.renyi_bins);
    cfg.p2p_windows = j.value("p2p_windows", cfg.p2p_windows);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("univariate config: ") + e.what());
  }
}

void to_json(nlohmann::json& j, const ExtractConfig& cfg) {
  nlohmann::json blocks = nlohmann::json::array();
  if (cfg.linear) blocks.push_back("L");
  if (cfg.nonlinear) blocks.push_back("NL");
  if (cfg.pli) blocks.push_back("PLI");
  j = nlohmann::json{{"filter", cfg.filter},
                     {"univariate", cfg.univariate},
                     {"pli_trim", cfg.pli_trim},
                     {"blocks", std::move(blocks)}};
}

void from_json(const nlohmann::json& j, ExtractConfig& cfg) {
  try {
    if (j.contains("filter")) cfg.filter = j.at("filter").get<FilterConfig>();
    if (j.contains("univariate")) cfg.univariate = j.at("univariate").get<UnivariateConfig>();
    cfg.pli_trim = j.value("pli_trim", cfg.pli_trim);
    if (j.contains("blocks")) {
      cfg.linear = cfg.nonlinear = cfg.pli = false;
      for (const auto& block : j.at("blocks")) {
        const std::string name = block.get<std::string>();
        if (name == "L") cfg.linear = true;
        else if (name == "NL") cfg.nonlinear = true;
        else if (name == "PLI") cfg.pli = true;
        else throw Error(ErrorCode::ConfigError, "unknown extraction block: " + name);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("extract config: ") + e.what());
  }
}

const char* normalization_name(NormalizationMode mode) {
  return mode == NormalizationMode::ZScore ? "zscore" : "minmax";
}

NormalizationMode parse_normalization(const std::string& text) {
  if (text == "zscore") return NormalizationMode::ZScore;
  if (text == "minmax") return NormalizationMode::MinMaxSymmetric;
  throw Error(ErrorCode::ConfigError, "unknown normalization: " + text);
}

std::vector<std::string> extraction_columns(const ChannelLayout& layout,
                                            const ExtractConfig& cfg) {
  std::vector<std::string> names;
  const auto& channels = layout.names();
  if (cfg.linear) {
    for (const auto& stem : linear_feature_stems()) {
      for (const auto& channel : channels) names.push_back(stem + "@" + channel);
    }
  }
  if (cfg.nonlinear) {
    for (const auto& stem : nonlinear_feature_stems(cfg.univariate)) {
      for (const auto& channel : channels) names.push_back(stem + "@" + channel);
    }
  }
  if (cfg.pli) {
    for (std::size_t i = 0; i < layout.size(); ++i) {
      for (std::size_t k = i + 1; k < layout.size(); ++k) {
        names.push_back(edge_name(layout, i, k));
      }
    }
  }
  return names;
}

FeatureTable extract_feature_table(const Dataset& ds, const ExtractConfig& cfg,
                                   int workers) {
  validate_dataset(ds);
  if (!cfg.linear && !cfg.nonlinear && !cfg.pli) {
    throw Error(ErrorCode::ConfigError, "no feature blocks enabled");
  }
  if (cfg.filter.enabled) {
    // Surface kernel design errors once, before the per-epoch loop.
    design_bandpass_kernel(ds.epochs.front().fs, cfg.filter.lo, cfg.filter.hi,
                           cfg.filter.taps);
  }

  const ChannelLayout& layout = *ds.layout;
  const std::size_t n_linear =
      cfg.linear ? linear_feature_stems().size() * layout.size() : 0;
  const std::size_t n_nonlinear =
      cfg.nonlinear ? nonlinear_feature_stems(cfg.univariate).size() * layout.size() : 0;

  FeatureTable table;
  table.feature_names = extraction_columns(layout, cfg);
  const auto n = static_cast<Eigen::Index>(ds.epochs.size());
  const auto d = static_cast<Eigen::Index>(table.feature_names.size());
  table.values.resize(n, d);
  table.subject_ids.resize(ds.epochs.size());
  table.labels.resize(ds.epochs.size());
  table.epoch_indices.resize(ds.epochs.size());

  parallel_for(ds.epochs.size(), workers, [&](std::size_t row) {
    const Epoch& source = ds.epochs[row];
    try {
      Epoch work = source;
      if (cfg.filter.enabled) {
        for (auto& channel : work.samples) {
          channel = bandpass_fir(channel, work.fs, cfg.filter.lo, cfg.filter.hi,
                                 cfg.filter.taps);
        }
      }

      Eigen::Index col = 0;
      if (cfg.linear || cfg.nonlinear) {
        const UnivariateBlock block = extract_univariate(work, layout, cfg.univariate);
        const std::size_t linear_total = linear_feature_stems().size() * layout.size();
        const std::size_t nonlinear_total =
            nonlinear_feature_stems(cfg.univariate).size() * layout.size();
        if (block.values.size() != linear_total + nonlinear_total) {
          throw Error(ErrorCode::SchemaError, "univariate block size mismatch");
        }
        if (cfg.linear) {
          for (std::size_t i = 0; i < n_linear; ++i) {
            table.values(static_cast<Eigen::Index>(row), col++) = block.values[i];
          }
        }
        if (cfg.nonlinear) {
          for (std::size_t i = 0; i < n_nonlinear; ++i) {
            table.values(static_cast<Eigen::Index>(row), col++) =
                block.values[linear_total + i];
          }
        }
      }
      if (cfg.pli) {
        const ConnectivityBlock block = extract_connectivity(work, layout, cfg.pli_trim);
        for (const double value : block.values) {
          table.values(static_cast<Eigen::Index>(row), col++) = value;
        }
      }
      if (col != d) {
        throw Error(ErrorCode::SchemaError, "extraction column count mismatch");
      }
    } catch (const Error& e) {
      throw Error(e.code(), "epoch " + source.subject_id + "/" +
                                std::to_string(source.epoch_index) + ": " + e.raw_message());
    }

    table.subject_ids[row] = source.subject_id;
    table.labels[row] = source.label;
    table.epoch_indices[row] = source.epoch_index;
  });
  return table;
}

void to_json(nlohmann::json& j, const PipelineConfig& cfg) {
  nlohmann::json models = nlohmann::json::array();
  for (const auto& spec : cfg.models) models.push_back(spec);
  j = nlohmann::json{{"dataset_path", cfg.dataset_path},
                     {"fs", cfg.fs},
                     {"extract", cfg.extract},
                     {"selector", selector_name(cfg.selector)},
                     {"selection",
                      {{"top_n", cfg.selection.top_n},
                       {"relieff_k", cfg.selection.relieff_k},
                       {"relieff_m", cfg.selection.relieff_m},
                       {"seed", cfg.selection.seed}}},
                     {"scope", selection_scope_name(cfg.scope)},
                     {"featureset", cfg.featureset},
                     {"models", std::move(models)},
                     {"normalization", normalization_name(cfg.normalization)},
                     {"alpha", cfg.alpha},
                     {"bonferroni_divisor", cfg.bonferroni_divisor},
                     {"out_dir", cfg.out_dir},
                     {"workers", cfg.workers}};
  if (cfg.synth) j["synth"] = *cfg.synth;
}

void from_json(const nlohmann::json& j, PipelineConfig& cfg) {
  try {
    if (j.contains("synth")) cfg.synth = j.at("synth").get<SynthConfig>();
    cfg.dataset_path = j.value("dataset_path", cfg.dataset_path);
    cfg.fs = j.value("fs", cfg.fs);
    if (j.contains("extract")) cfg.extract = j.at("extract").get<ExtractConfig>();
    if (j.contains("selector")) cfg.selector = parse_selector(j.at("selector").get<std::string>());
    if (j.contains("selection")) {
      const auto& s = j.at("selection");
      cfg.selection.top_n = s.value("top_n", cfg.selection.top_n);
      cfg.selection.relieff_k = s.value("relieff_k", cfg.selection.relieff_k);
      cfg.selection.relieff_m = s.value("relieff_m", cfg.selection.relieff_m);
      cfg.selection.seed = s.value("seed", cfg.selection.seed);
    }
    if (j.contains("scope")) cfg.scope = parse_selection_scope(j.at("scope").get<std::string>());
    cfg.featureset = j.value("featureset", cfg.featureset);
    if (j.contains("models")) {
      cfg.models.clear();
      for (const auto& spec : j.at("models")) {
        // Accept a bare kind name as shorthand for a default-parameter spec.
        if (spec.is_string()) {
          ModelSpec m;
          m.kind = parse_model_kind(spec.get<std::string>());
          cfg.models.push_back(m);
        } else {
          cfg.models.push_back(spec.get<ModelSpec>());
        }
      }
    }
    if (j.contains("normalization")) {
      cfg.normalization = parse_normalization(j.at("normalization").get<std::string>());
    }
    cfg.alpha = j.value("alpha", cfg.alpha);
    cfg.bonferroni_divisor = j.value("bonferroni_divisor", cfg.bonferroni_divisor);
    cfg.out_dir = j.value("out_dir", cfg.out_dir);
    cfg.workers = j.value("workers", cfg.workers);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("pipeline config: ") + e.what());
  }
}

std::uint64_t pipeline_config_digest(const PipelineConfig& cfg) {
  nlohmann::json j;
  to_json(j, cfg);
  return fnv1a64(j.dump());
}

std::vector<ModelSpec> default_grid_models() {
  std::vector<ModelSpec> models(4);
  models[0].kind = ModelKind::KNN;
  models[1].kind = ModelKind::NB;
  models[2].kind = ModelKind::DT;
  models[3].kind = ModelKind::LR;
  return models;
}

Dataset resolve_dataset(const PipelineConfig& cfg) {
  if (cfg.synth.has_value() == !cfg.dataset_path.empty()) {
    throw Error(ErrorCode::ConfigError,
                "configure exactly one dataset source (synth or dataset_path)");
  }
  if (cfg.synth) return synth_dataset(*cfg.synth);
  return load_epochs_csv(cfg.dataset_path, cfg.fs);
}

EvalConfig eval_config(const PipelineConfig& cfg) {
  if (cfg.models.empty()) {
    throw Error(ErrorCode::ConfigError, "no models configured");
  }
  EvalConfig out;
  out.selector = cfg.selector;
  out.selection = cfg.selection;
  out.scope = cfg.scope;
  out.model = cfg.models.front();
  out.normalization = cfg.normalization;
  return out;
}

}  // namespace eegdep
