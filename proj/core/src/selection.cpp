#include "eegdep/selection.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <limits>
#include <nlohmann/json.hpp>
#include <numeric>
#include <unordered_set>

#include "eegdep/discretize.hpp"
#include "eegdep/errors.hpp"
#include "eegdep/infotheory.hpp"
#include "eegdep/rng.hpp"

namespace eegdep {

namespace {

void validate_table(const FeatureTable& t) {
  if (t.n_rows() < 2) {
    throw Error(ErrorCode::InsufficientData, "selection needs at least 2 rows");
  }
  std::unordered_set<std::string> seen;
  for (const auto& name : t.feature_names) {
    if (!seen.insert(name).second) {
      throw Error(ErrorCode::SchemaError, "duplicate feature name: " + name);
    }
  }
  for (Eigen::Index c = 0; c < t.n_features(); ++c) {
    for (Eigen::Index r = 0; r < t.n_rows(); ++r) {
      if (!std::isfinite(t.values(r, c))) {
        throw Error(ErrorCode::NonFiniteFeature,
                    "feature " + t.feature_names[static_cast<std::size_t>(c)] + " row " +
                        std::to_string(r) + " is not finite");
      }
    }
  }
}

std::vector<int> label_codes(const FeatureTable& t) {
  std::vector<int> codes(static_cast<std::size_t>(t.n_rows()));
  for (std::size_t i = 0; i < codes.size(); ++i) {
    codes[i] = t.labels[i] == Label::MDD ? 1 : 0;
  }
  return codes;
}

std::vector<int> discretized_column(const FeatureTable& t, Eigen::Index c,
                                    const std::vector<int>& labels) {
  std::vector<double> col(static_cast<std::size_t>(t.n_rows()));
  for (Eigen::Index r = 0; r < t.n_rows(); ++r) col[static_cast<std::size_t>(r)] = t.values(r, c);
  const auto bounds = mdl_discretize(col, labels);
  return apply_bins(col, bounds);
}

void rank_sort(std::vector<ScoredFeature>& ranked) {
  std::sort(ranked.begin(), ranked.end(), [](const ScoredFeature& a, const ScoredFeature& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.name < b.name;
  });
}

// Feature-feature SU computed on demand; every feature is discretized once.
struct LazySu {
  std::vector<std::vector<int>> columns;
  Eigen::VectorXd feature_class;
  Eigen::MatrixXd feature_feature;  // NaN = not yet computed

  explicit LazySu(const FeatureTable& t) {
    const auto labels = label_codes(t);
    const auto d = t.n_features();
    columns.resize(static_cast<std::size_t>(d));
    feature_class.resize(d);
    for (Eigen::Index c = 0; c < d; ++c) {
      columns[static_cast<std::size_t>(c)] = discretized_column(t, c, labels);
      feature_class[c] = symmetrical_uncertainty(columns[static_cast<std::size_t>(c)], labels);
    }
    feature_feature =
        Eigen::MatrixXd::Constant(d, d, std::numeric_limits<double>::quiet_NaN());
    feature_feature.diagonal().setOnes();
  }

  double ff(Eigen::Index a, Eigen::Index b) {
    double& slot = feature_feature(a, b);
    if (std::isnan(slot)) {
      slot = symmetrical_uncertainty(columns[static_cast<std::size_t>(a)],
                                     columns[static_cast<std::size_t>(b)]);
      feature_feature(b, a) = slot;
    }
    return slot;
  }
};

double merit_value(double rcf_sum, double rff_pair_sum, std::size_t k) {
  if (k == 0) return 0.0;
  const auto kd = static_cast<double>(k);
  const double mean_rcf = rcf_sum / kd;
  const double mean_rff =
      k > 1 ? rff_pair_sum / (kd * (kd - 1.0) / 2.0) : 0.0;
  return kd * mean_rcf / std::sqrt(kd + kd * (kd - 1.0) * mean_rff);
}

}  // namespace

const char* selector_name(SelectorKind kind) {
  switch (kind) {
    case SelectorKind::None: return "None";
    case SelectorKind::CfsGsw: return "CFS-GSW";
    case SelectorKind::InfoGain: return "InfoGain";
    case SelectorKind::ReliefF: return "ReliefF";
  }
  return "None";
}

SelectorKind parse_selector(const std::string& text) {
  std::string lower;
  for (char c : text) {
    if (c == '-' || c == '_') continue;
    lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (lower == "none") return SelectorKind::None;
  if (lower == "cfsgsw" || lower == "cfs") return SelectorKind::CfsGsw;
  if (lower == "infogain" || lower == "ig") return SelectorKind::InfoGain;
  if (lower == "relieff") return SelectorKind::ReliefF;
  throw Error(ErrorCode::ConfigError, "unknown selector: " + text);
}

std::vector<std::string> SelectionResult::selected() const {
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(n_selected));
  for (int i = 0; i < n_selected; ++i) out.push_back(ranked[static_cast<std::size_t>(i)].name);
  return out;
}

void to_json(nlohmann::json& j, const SelectionResult& r) {
  nlohmann::json ranked = nlohmann::json::array();
  for (const auto& f : r.ranked) ranked.push_back({{"name", f.name}, {"score", f.score}});
  j = nlohmann::json{{"method", r.method},
                     {"n_selected", r.n_selected},
                     {"ranked", ranked},
                     {"config",
                      {{"top_n", r.config.top_n},
                       {"relieff_k", r.config.relieff_k},
                       {"relieff_m", r.config.relieff_m},
                       {"seed", r.config.seed}}}};
}

SuCache build_su_cache(const FeatureTable& table) {
  validate_table(table);
  LazySu lazy(table);
  const auto d = table.n_features();
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index b = a + 1; b < d; ++b) lazy.ff(a, b);
  }
  SuCache cache;
  cache.names = table.feature_names;
  cache.feature_class = std::move(lazy.feature_class);
  cache.feature_feature = std::move(lazy.feature_feature);
  return cache;
}

double cfs_merit(const std::vector<std::size_t>& subset, const SuCache& cache) {
  if (subset.empty()) return 0.0;
  double rcf_sum = 0.0;
  for (std::size_t f : subset) {
    const double v = cache.feature_class[static_cast<Eigen::Index>(f)];
    if (std::isnan(v)) {
      throw Error(ErrorCode::MissingCorrelation, "no class correlation for " + cache.names[f]);
    }
    rcf_sum += v;
  }
  double rff_sum = 0.0;
  for (std::size_t i = 0; i < subset.size(); ++i) {
    for (std::size_t j = i + 1; j < subset.size(); ++j) {
      const double v = cache.feature_feature(static_cast<Eigen::Index>(subset[i]),
                                             static_cast<Eigen::Index>(subset[j]));
      if (std::isnan(v)) {
        throw Error(ErrorCode::MissingCorrelation, "no pair correlation for " +
                                                       cache.names[subset[i]] + ", " +
                                                       cache.names[subset[j]]);
      }
      rff_sum += v;
    }
  }
  return merit_value(rcf_sum, rff_sum, subset.size());
}

SelectionResult info_gain_rank(const FeatureTable& table, const SelectionConfig& cfg) {
  validate_table(table);
  if (cfg.top_n < 1) throw Error(ErrorCode::ConfigError, "top_n must be >= 1");
  const auto labels = label_codes(table);

  SelectionResult result;
  result.method = selector_name(SelectorKind::InfoGain);
  result.config = cfg;
  for (Eigen::Index c = 0; c < table.n_features(); ++c) {
    const auto bins = discretized_column(table, c, labels);
    result.ranked.push_back(
        {table.feature_names[static_cast<std::size_t>(c)], info_gain(bins, labels)});
  }
  rank_sort(result.ranked);
  result.n_selected = static_cast<int>(
      std::min<Eigen::Index>(cfg.top_n, table.n_features()));
  return result;
}

SelectionResult relieff_rank(const FeatureTable& table, const SelectionConfig& cfg) {
  validate_table(table);
  if (cfg.top_n < 1) throw Error(ErrorCode::ConfigError, "top_n must be >= 1");
  if (cfg.relieff_k < 1) throw Error(ErrorCode::ConfigError, "relieff_k must be >= 1");
  const auto n = table.n_rows();
  const auto d = table.n_features();
  const auto k = static_cast<std::size_t>(cfg.relieff_k);

  std::array<std::size_t, 2> class_count{0, 0};
  const auto labels = label_codes(table);
  for (int code : labels) ++class_count[static_cast<std::size_t>(code)];
  for (std::size_t cls = 0; cls < 2; ++cls) {
    if (class_count[cls] <= k) {
      throw Error(ErrorCode::TooFewInstances,
                  std::string("class ") + (cls == 1 ? "MDD" : "NC") + " has " +
                      std::to_string(class_count[cls]) + " rows, need more than " +
                      std::to_string(k));
    }
  }

  // Range-normalize once; diff(A, I1, I2) is then |normalized difference|.
  Eigen::MatrixXd norm(n, d);
  for (Eigen::Index c = 0; c < d; ++c) {
    const double lo = table.values.col(c).minCoeff();
    const double hi = table.values.col(c).maxCoeff();
    if (hi > lo) {
      norm.col(c) = (table.values.col(c).array() - lo) / (hi - lo);
    } else {
      norm.col(c).setZero();
    }
  }

  std::vector<Eigen::Index> sampled;
  if (cfg.relieff_m < 0 || cfg.relieff_m >= static_cast<int>(n)) {
    sampled.resize(static_cast<std::size_t>(n));
    std::iota(sampled.begin(), sampled.end(), 0);
  } else {
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    Rng rng(cfg.seed);
    rng.shuffle(order);
    sampled.assign(order.begin(), order.begin() + cfg.relieff_m);
  }

  const Eigen::VectorXd sq = norm.rowwise().squaredNorm();
  const Eigen::MatrixXd gram = norm * norm.transpose();

  Eigen::VectorXd weights = Eigen::VectorXd::Zero(d);
  const double m_used = static_cast<double>(sampled.size());
  std::vector<std::pair<double, Eigen::Index>> hits;
  std::vector<std::pair<double, Eigen::Index>> misses;
  for (const Eigen::Index i : sampled) {
    hits.clear();
    misses.clear();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      const double dist2 = std::max(0.0, sq[i] + sq[j] - 2.0 * gram(i, j));
      auto& bucket = labels[static_cast<std::size_t>(j)] == labels[static_cast<std::size_t>(i)]
                         ? hits
                         : misses;
      bucket.emplace_back(dist2, j);
    }
    // Nearest k by distance, then row index.
    std::partial_sort(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(k), hits.end());
    std::partial_sort(misses.begin(), misses.begin() + static_cast<std::ptrdiff_t>(k),
                      misses.end());
    for (std::size_t nb = 0; nb < k; ++nb) {
      const auto h = hits[nb].second;
      const auto ms = misses[nb].second;
      weights.array() += ((norm.row(i) - norm.row(ms)).cwiseAbs() -
                          (norm.row(i) - norm.row(h)).cwiseAbs())
                             .transpose()
                             .array() /
                         (m_used * static_cast<double>(k));
    }
  }

  SelectionResult result;
  result.method = selector_name(SelectorKind::ReliefF);
  result.config = cfg;
  for (Eigen::Index c = 0; c < d; ++c) {
    result.ranked.push_back({table.feature_names[static_cast<std::size_t>(c)], weights[c]});
  }
  rank_sort(result.ranked);
  result.n_selected = static_cast<int>(std::min<Eigen::Index>(cfg.top_n, d));
  return result;
}

SelectionResult cfs_greedy_stepwise(const FeatureTable& table, const SelectionConfig& cfg) {
  validate_table(table);
  LazySu su(table);
  const auto d = table.n_features();

  std::vector<bool> in_subset(static_cast<std::size_t>(d), false);
  std::vector<double> su_with_subset(static_cast<std::size_t>(d), 0.0);
  double rcf_sum = 0.0;
  double rff_pair_sum = 0.0;
  double merit = 0.0;
  std::size_t k = 0;

  SelectionResult result;
  result.method = selector_name(SelectorKind::CfsGsw);
  result.config = cfg;

  while (true) {
    double best_merit = -std::numeric_limits<double>::infinity();
    Eigen::Index best = -1;
    for (Eigen::Index f = 0; f < d; ++f) {
      if (in_subset[static_cast<std::size_t>(f)]) continue;
      const double candidate = merit_value(rcf_sum + su.feature_class[f],
                                           rff_pair_sum + su_with_subset[static_cast<std::size_t>(f)],
                                           k + 1);
      const bool better =
          candidate > best_merit ||
          (candidate == best_merit && best >= 0 &&
           table.feature_names[static_cast<std::size_t>(f)] <
               table.feature_names[static_cast<std::size_t>(best)]);
      if (better) {
        best_merit = candidate;
        best = f;
      }
    }
    if (best < 0 || best_merit <= merit) break;

    in_subset[static_cast<std::size_t>(best)] = true;
    rcf_sum += su.feature_class[best];
    rff_pair_sum += su_with_subset[static_cast<std::size_t>(best)];
    merit = best_merit;
    ++k;
    result.ranked.push_back({table.feature_names[static_cast<std::size_t>(best)], merit});
    for (Eigen::Index f = 0; f < d; ++f) {
      if (!in_subset[static_cast<std::size_t>(f)]) {
        su_with_subset[static_cast<std::size_t>(f)] += su.ff(f, best);
      }
    }
  }

  result.n_selected = static_cast<int>(k);
  return result;
}

SelectionResult run_selector(SelectorKind kind, const FeatureTable& table,
                             const SelectionConfig& cfg) {
  switch (kind) {
    case SelectorKind::None: {
      validate_table(table);
      SelectionResult result;
      result.method = selector_name(SelectorKind::None);
      result.config = cfg;
      for (const auto& name : table.feature_names) result.ranked.push_back({name, 0.0});
      result.n_selected = static_cast<int>(table.n_features());
      return result;
    }
    case SelectorKind::CfsGsw:
      return cfs_greedy_stepwise(table, cfg);
    case SelectorKind::InfoGain:
      return info_gain_rank(table, cfg);
    case SelectorKind::ReliefF:
      return relieff_rank(table, cfg);
  }
  throw Error(ErrorCode::ConfigError, "unknown selector kind");
}

}  // namespace eegdep
