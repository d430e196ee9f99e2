#include "eegdep/evaluation.hpp"

#include <algorithm>
#include <array>
#include <boost/math/distributions/students_t.hpp>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <nlohmann/json.hpp>
#include <numeric>
#include <sstream>

#include "eegdep/connectivity.hpp"
#include "eegdep/csv_io.hpp"
#include "eegdep/digest.hpp"
#include "eegdep/errors.hpp"
#include "eegdep/parallel.hpp"
#include "eegdep/univariate.hpp"

namespace eegdep {

namespace {

bool is_nonlinear_stem(const std::string& stem) {
  if (stem == "c0" || stem == "svden" || stem == "spec_ent") return true;
  return stem.rfind("renyi_q", 0) == 0;
}

std::string fmt4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

std::string fmt6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

nlohmann::json eval_config_json(const std::string& featureset_tag, const EvalConfig& cfg) {
  nlohmann::json model;
  to_json(model, cfg.model);
  return nlohmann::json{
      {"featureset", featureset_tag},
      {"selector", selector_name(cfg.selector)},
      {"selection",
       {{"top_n", cfg.selection.top_n},
        {"relieff_k", cfg.selection.relieff_k},
        {"relieff_m", cfg.selection.relieff_m},
        {"seed", cfg.selection.seed}}},
      {"scope", selection_scope_name(cfg.scope)},
      {"model", model},
      {"normalization",
       cfg.normalization == NormalizationMode::ZScore ? "zscore" : "minmax"}};
}

std::uint64_t fold_digest(const std::vector<std::string>& selected,
                          const StandardizationParams& params) {
  std::string blob;
  for (const auto& name : selected) {
    blob += name;
    blob += ';';
  }
  for (Eigen::Index i = 0; i < params.offset.size(); ++i) {
    blob += format_double(params.offset[i]);
    blob += ',';
    blob += format_double(params.scale[i]);
    blob += ';';
  }
  return fnv1a64(blob);
}

}  // namespace

FeatureBlock feature_block_of(const std::string& name) {
  if (name.rfind("pli:", 0) == 0) return FeatureBlock::Pli;
  const auto at = name.find('@');
  if (at != std::string::npos) {
    const std::string stem = name.substr(0, at);
    const auto& linear = linear_feature_stems();
    if (std::find(linear.begin(), linear.end(), stem) != linear.end()) {
      return FeatureBlock::Linear;
    }
    if (is_nonlinear_stem(stem)) return FeatureBlock::Nonlinear;
  }
  throw Error(ErrorCode::UnknownFeature, "no feature block for name: " + name);
}

const std::vector<std::string>& feature_set_tags() {
  static const std::vector<std::string> tags = {"L",   "NL",    "L+NL",   "PLI",
                                                "L+PLI", "NL+PLI", "All"};
  return tags;
}

FeatureSetSpec resolve_feature_set(const std::string& tag,
                                   const std::vector<std::string>& table_columns) {
  bool want_all = false;
  bool want_linear = false;
  bool want_nonlinear = false;
  bool want_pli = false;
  std::string token;
  std::istringstream stream(tag);
  while (std::getline(stream, token, '+')) {
    std::string upper;
    for (char c : token) {
      if (c == ' ') continue;
      upper.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    }
    if (upper == "ALL") want_all = true;
    else if (upper == "L") want_linear = true;
    else if (upper == "NL") want_nonlinear = true;
    else if (upper == "PLI") want_pli = true;
    else throw Error(ErrorCode::ConfigError, "unknown feature set token: " + token);
  }
  if (!want_all && !want_linear && !want_nonlinear && !want_pli) {
    throw Error(ErrorCode::ConfigError, "empty feature set tag");
  }

  FeatureSetSpec spec;
  if (want_all) {
    spec.tag = "All";
    spec.columns = table_columns;
    return spec;
  }
  std::string canonical;
  const std::pair<bool, const char*> parts[] = {
      {want_linear, "L"}, {want_nonlinear, "NL"}, {want_pli, "PLI"}};
  for (const auto& [flag, name] : parts) {
    if (!flag) continue;
    if (!canonical.empty()) canonical += '+';
    canonical += name;
  }
  spec.tag = canonical;
  for (const auto& column : table_columns) {
    const auto block = feature_block_of(column);
    if ((block == FeatureBlock::Linear && want_linear) ||
        (block == FeatureBlock::Nonlinear && want_nonlinear) ||
        (block == FeatureBlock::Pli && want_pli)) {
      spec.columns.push_back(column);
    }
  }
  return spec;
}

Metrics metrics(const ConfusionCounts& counts) {
  if (counts.tp < 0 || counts.fn < 0 || counts.tn < 0 || counts.fp < 0) {
    throw Error(ErrorCode::ConfigError, "negative confusion counts");
  }
  if (counts.total() == 0) {
    throw Error(ErrorCode::EmptyConfusion, "all confusion counts are zero");
  }
  Metrics m;
  m.accuracy = static_cast<double>(counts.tp + counts.tn) / static_cast<double>(counts.total());
  if (counts.tp + counts.fn > 0) {
    m.sensitivity = static_cast<double>(counts.tp) / static_cast<double>(counts.tp + counts.fn);
  }
  if (counts.tn + counts.fp > 0) {
    m.specificity = static_cast<double>(counts.tn) / static_cast<double>(counts.tn + counts.fp);
  }
  return m;
}

const char* selection_scope_name(SelectionScope scope) {
  return scope == SelectionScope::Fold ? "fold" : "global";
}

SelectionScope parse_selection_scope(const std::string& text) {
  if (text == "fold") return SelectionScope::Fold;
  if (text == "global") return SelectionScope::Global;
  throw Error(ErrorCode::ConfigError, "unknown selection scope: " + text);
}

void to_json(nlohmann::json& j, const CvReport& report) {
  nlohmann::json folds = nlohmann::json::array();
  for (const auto& fold : report.folds) {
    nlohmann::json predictions = nlohmann::json::array();
    for (const auto& p : fold.predictions) {
      predictions.push_back({{"epoch_index", p.epoch_index},
                             {"truth", label_name(p.truth)},
                             {"predicted", label_name(p.predicted)},
                             {"score", p.score}});
    }
    folds.push_back({{"subject_id", fold.subject_id},
                     {"selected_features", fold.selected_features},
                     {"predictions", std::move(predictions)}});
  }
  nlohmann::json m{{"accuracy", report.epoch_metrics.accuracy}};
  m["sensitivity"] = report.epoch_metrics.sensitivity
                         ? nlohmann::json(*report.epoch_metrics.sensitivity)
                         : nlohmann::json(nullptr);
  m["specificity"] = report.epoch_metrics.specificity
                         ? nlohmann::json(*report.epoch_metrics.specificity)
                         : nlohmann::json(nullptr);
  j = nlohmann::json{{"featureset", report.featureset_tag},
                     {"selector", report.selector},
                     {"model", report.model},
                     {"config_digest", hex64(report.config_digest)},
                     {"folds", std::move(folds)},
                     {"confusion",
                      {{"tp", report.confusion.tp},
                       {"fn", report.confusion.fn},
                       {"tn", report.confusion.tn},
                       {"fp", report.confusion.fp}}},
                     {"epoch_metrics", std::move(m)},
                     {"subject_majority_accuracy", report.subject_majority_accuracy}};
}

CvReport loso_cv(const FeatureTable& table, const FeatureSetSpec& featureset,
                 const EvalConfig& cfg) {
  const FeatureTable sub = table.select_columns(featureset.columns);

  const auto subjects = sub.subjects();
  {
    std::map<std::string, Label> label_of;
    for (std::size_t i = 0; i < sub.subject_ids.size(); ++i) {
      label_of[sub.subject_ids[i]] = sub.labels[i];
    }
    std::array<int, 2> per_class{0, 0};
    for (const auto& [subject, label] : label_of) {
      ++per_class[label == Label::MDD ? 1 : 0];
    }
    if (per_class[0] < 2 || per_class[1] < 2) {
      throw Error(ErrorCode::TooFewSubjects, "leave-one-subject-out needs >= 2 subjects per "
                                             "class, have NC=" +
                                                 std::to_string(per_class[0]) + " MDD=" +
                                                 std::to_string(per_class[1]));
    }
  }

  CvReport report;
  report.featureset_tag = featureset.tag;
  report.selector = selector_name(cfg.selector);
  report.model = model_kind_name(cfg.model.kind);
  report.config_digest = fnv1a64(eval_config_json(featureset.tag, cfg).dump());

  std::vector<std::string> global_selected;
  if (cfg.scope == SelectionScope::Global && cfg.selector != SelectorKind::None) {
    global_selected = run_selector(cfg.selector, sub, cfg.selection).selected();
  } else if (cfg.selector == SelectorKind::None) {
    global_selected = sub.feature_names;
  }

  for (const auto& subject : subjects) {
    try {
      std::vector<Eigen::Index> train_rows;
      std::vector<Eigen::Index> test_rows;
      for (Eigen::Index r = 0; r < sub.n_rows(); ++r) {
        (sub.subject_ids[static_cast<std::size_t>(r)] == subject ? test_rows : train_rows)
            .push_back(r);
      }
      const FeatureTable train_table = sub.select_rows(train_rows);
      const FeatureTable test_table = sub.select_rows(test_rows);

      std::vector<std::string> selected;
      if (cfg.scope == SelectionScope::Fold && cfg.selector != SelectorKind::None) {
        selected = run_selector(cfg.selector, train_table, cfg.selection).selected();
      } else {
        selected = global_selected;
      }

      const FeatureTable train_proj = train_table.select_columns(selected);
      const FeatureTable test_proj = test_table.select_columns(selected);

      const auto params = standardize_fit(train_proj.values, cfg.normalization);
      const Eigen::MatrixXd x_train = standardize_apply(params, train_proj.values);
      const Eigen::MatrixXd x_test = standardize_apply(params, test_proj.values);

      std::vector<std::string> row_ids;
      row_ids.reserve(static_cast<std::size_t>(x_train.rows()));
      for (std::size_t i = 0; i < train_proj.subject_ids.size(); ++i) {
        row_ids.push_back(train_proj.subject_ids[i] + "/" +
                          std::to_string(train_proj.epoch_indices[i]));
      }
      const TrainedModel model = train(cfg.model, x_train, train_proj.labels, std::move(row_ids));

      FoldResult fold;
      fold.subject_id = subject;
      fold.selected_features = selected;
      fold.train_digest = fold_digest(selected, params);
      for (Eigen::Index r = 0; r < x_test.rows(); ++r) {
        const auto pred = model.predict(x_test.row(r).transpose());
        fold.predictions.push_back({test_proj.epoch_indices[static_cast<std::size_t>(r)],
                                    test_proj.labels[static_cast<std::size_t>(r)], pred.label,
                                    pred.score});
      }
      report.folds.push_back(std::move(fold));
    } catch (const Error& e) {
      throw Error(e.code(), "fold " + subject + ": " + e.raw_message());
    }
  }

  std::size_t correct_subjects = 0;
  for (const auto& fold : report.folds) {
    std::size_t mdd_votes = 0;
    Label truth = Label::NC;
    for (const auto& p : fold.predictions) {
      truth = p.truth;
      const bool hit = p.predicted == Label::MDD;
      if (hit) ++mdd_votes;
      if (p.truth == Label::MDD) {
        ++(hit ? report.confusion.tp : report.confusion.fn);
      } else {
        ++(hit ? report.confusion.fp : report.confusion.tn);
      }
    }
    // Majority vote per held-out subject; a tie falls to NC.
    const Label voted =
        2 * mdd_votes > fold.predictions.size() ? Label::MDD : Label::NC;
    if (voted == truth) ++correct_subjects;
  }
  report.epoch_metrics = metrics(report.confusion);
  report.subject_majority_accuracy =
      static_cast<double>(correct_subjects) / static_cast<double>(report.folds.size());
  return report;
}

const GridCell& GridResult::cell(std::size_t fs, std::size_t sel, std::size_t model) const {
  return cells[(fs * selectors.size() + sel) * models.size() + model];
}

GridResult grid_evaluate(const FeatureTable& table,
                         const std::vector<std::string>& featureset_tags,
                         const std::vector<SelectorKind>& selectors,
                         const std::vector<ModelSpec>& models, const EvalConfig& base,
                         int workers) {
  GridResult grid;
  grid.featureset_tags = featureset_tags;
  grid.selectors = selectors;
  grid.models = models;
  grid.cells.resize(featureset_tags.size() * selectors.size() * models.size());

  parallel_for(grid.cells.size(), workers, [&](std::size_t index) {
    const std::size_t model_i = index % models.size();
    const std::size_t sel_i = (index / models.size()) % selectors.size();
    const std::size_t fs_i = index / (models.size() * selectors.size());

    GridCell& cell = grid.cells[index];
    cell.selector = selector_name(selectors[sel_i]);
    cell.model = model_kind_name(models[model_i].kind);
    EvalConfig cfg = base;
    cfg.selector = selectors[sel_i];
    cfg.model = models[model_i];
    try {
      const auto spec = resolve_feature_set(featureset_tags[fs_i], table.feature_names);
      cell.featureset = spec.tag;
      const auto report = loso_cv(table, spec, cfg);
      cell.ok = true;
      cell.epoch_accuracy = report.epoch_metrics.accuracy;
      cell.subject_accuracy = report.subject_majority_accuracy;
      double total_selected = 0.0;
      for (const auto& fold : report.folds) {
        total_selected += static_cast<double>(fold.selected_features.size());
      }
      cell.mean_selected = total_selected / static_cast<double>(report.folds.size());
    } catch (const Error& e) {
      cell.featureset = featureset_tags[fs_i];
      cell.ok = false;
      cell.error = e.what();
    }
  });
  return grid;
}

std::string render_grid_csv(const GridResult& grid) {
  std::string out = "feature_set";
  for (const auto sel : grid.selectors) {
    out += ',';
    out += selector_name(sel);
  }
  out += '\n';
  for (std::size_t fs = 0; fs < grid.featureset_tags.size(); ++fs) {
    out += grid.cell(fs, 0, 0).featureset;
    for (std::size_t sel = 0; sel < grid.selectors.size(); ++sel) {
      std::vector<double> accs;
      for (std::size_t m = 0; m < grid.models.size(); ++m) {
        const auto& cell = grid.cell(fs, sel, m);
        if (cell.ok) accs.push_back(cell.epoch_accuracy);
      }
      out += ',';
      if (accs.empty()) {
        out += "NA";
        continue;
      }
      const double mean = std::accumulate(accs.begin(), accs.end(), 0.0) /
                          static_cast<double>(accs.size());
      double sd = 0.0;
      if (accs.size() > 1) {
        for (double a : accs) sd += (a - mean) * (a - mean);
        sd = std::sqrt(sd / static_cast<double>(accs.size() - 1));
      }
      out += fmt4(mean) + "±" + fmt4(sd);
    }
    out += '\n';
  }
  return out;
}

void to_json(nlohmann::json& j, const GridResult& grid) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& cell : grid.cells) {
    nlohmann::json c{{"featureset", cell.featureset},
                     {"selector", cell.selector},
                     {"model", cell.model},
                     {"ok", cell.ok}};
    if (cell.ok) {
      c["epoch_accuracy"] = cell.epoch_accuracy;
      c["subject_accuracy"] = cell.subject_accuracy;
      c["mean_selected"] = cell.mean_selected;
    } else {
      c["error"] = cell.error;
    }
    cells.push_back(std::move(c));
  }

  // Fig-2a-style per-classifier means and Fig-2b-style mean selected counts.
  nlohmann::json by_model = nlohmann::json::object();
  for (std::size_t m = 0; m < grid.models.size(); ++m) {
    double sum = 0.0;
    int n = 0;
    for (std::size_t fs = 0; fs < grid.featureset_tags.size(); ++fs) {
      for (std::size_t sel = 0; sel < grid.selectors.size(); ++sel) {
        const auto& cell = grid.cell(fs, sel, m);
        if (cell.ok) {
          sum += cell.epoch_accuracy;
          ++n;
        }
      }
    }
    by_model[model_kind_name(grid.models[m].kind)] =
        n > 0 ? nlohmann::json(sum / n) : nlohmann::json(nullptr);
  }
  nlohmann::json mean_selected = nlohmann::json::object();
  for (std::size_t sel = 0; sel < grid.selectors.size(); ++sel) {
    double sum = 0.0;
    int n = 0;
    for (std::size_t fs = 0; fs < grid.featureset_tags.size(); ++fs) {
      for (std::size_t m = 0; m < grid.models.size(); ++m) {
        const auto& cell = grid.cell(fs, sel, m);
        if (cell.ok) {
          sum += cell.mean_selected;
          ++n;
        }
      }
    }
    mean_selected[selector_name(grid.selectors[sel])] =
        n > 0 ? nlohmann::json(sum / n) : nlohmann::json(nullptr);
  }

  j = nlohmann::json{{"featureset_tags", grid.featureset_tags},
                     {"cells", std::move(cells)},
                     {"mean_accuracy_by_model", std::move(by_model)},
                     {"mean_selected_by_selector", std::move(mean_selected)}};
}

GroupStats group_ttest(const FeatureTable& table, double alpha, int correction_divisor) {
  // Canonical accumulation order (sorted subjects, sorted epochs) keeps the
  // result exactly invariant to row permutations.
  std::map<std::string, std::vector<Eigen::Index>> rows_by_subject;
  std::map<std::string, Label> label_of;
  for (Eigen::Index r = 0; r < table.n_rows(); ++r) {
    rows_by_subject[table.subject_ids[static_cast<std::size_t>(r)]].push_back(r);
    label_of[table.subject_ids[static_cast<std::size_t>(r)]] =
        table.labels[static_cast<std::size_t>(r)];
  }
  std::array<int, 2> group_sizes{0, 0};
  for (const auto& [subject, label] : label_of) ++group_sizes[label == Label::MDD ? 1 : 0];
  if (group_sizes[0] < 2 || group_sizes[1] < 2) {
    throw Error(ErrorCode::TooFewSubjects,
                "t-test needs >= 2 subjects per class, have NC=" +
                    std::to_string(group_sizes[0]) + " MDD=" +
                    std::to_string(group_sizes[1]));
  }

  const auto d = table.n_features();
  Eigen::MatrixXd subject_means(static_cast<Eigen::Index>(rows_by_subject.size()), d);
  std::vector<Label> subject_labels;
  {
    Eigen::Index s = 0;
    for (auto& [subject, rows] : rows_by_subject) {
      std::sort(rows.begin(), rows.end(), [&](Eigen::Index a, Eigen::Index b) {
        return table.epoch_indices[static_cast<std::size_t>(a)] <
               table.epoch_indices[static_cast<std::size_t>(b)];
      });
      Eigen::RowVectorXd sum = Eigen::RowVectorXd::Zero(d);
      for (const Eigen::Index r : rows) sum += table.values.row(r);
      subject_means.row(s) = sum / static_cast<double>(rows.size());
      subject_labels.push_back(label_of[subject]);
      ++s;
    }
  }

  GroupStats stats;
  stats.alpha = alpha;
  stats.divisor = correction_divisor > 0 ? static_cast<double>(correction_divisor)
                                         : static_cast<double>(d);
  const double threshold = alpha / stats.divisor;

  for (Eigen::Index f = 0; f < d; ++f) {
    std::array<double, 2> sum{0.0, 0.0};
    std::array<double, 2> count{0.0, 0.0};
    for (Eigen::Index s = 0; s < subject_means.rows(); ++s) {
      const std::size_t g = subject_labels[static_cast<std::size_t>(s)] == Label::MDD ? 1 : 0;
      sum[g] += subject_means(s, f);
      count[g] += 1.0;
    }
    const std::array<double, 2> mean{sum[0] / count[0], sum[1] / count[1]};
    std::array<double, 2> var{0.0, 0.0};
    for (Eigen::Index s = 0; s < subject_means.rows(); ++s) {
      const std::size_t g = subject_labels[static_cast<std::size_t>(s)] == Label::MDD ? 1 : 0;
      const double dev = subject_means(s, f) - mean[g];
      var[g] += dev * dev;
    }
    var[0] /= count[0] - 1.0;
    var[1] /= count[1] - 1.0;

    FeatureStat row;
    row.name = table.feature_names[static_cast<std::size_t>(f)];
    const double se2 = var[0] / count[0] + var[1] / count[1];
    const double diff = mean[1] - mean[0];  // MDD minus NC
    if (se2 == 0.0) {
      row.t = 0.0;
      row.p = diff == 0.0 ? 1.0 : 0.0;
      if (diff != 0.0) row.t = diff > 0 ? std::numeric_limits<double>::infinity()
                                        : -std::numeric_limits<double>::infinity();
    } else {
      row.t = diff / std::sqrt(se2);
      const double df_num = se2 * se2;
      const double df_den = (var[0] / count[0]) * (var[0] / count[0]) / (count[0] - 1.0) +
                            (var[1] / count[1]) * (var[1] / count[1]) / (count[1] - 1.0);
      const double df = df_num / df_den;
      const boost::math::students_t dist(df);
      row.p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(row.t)));
    }
    row.significant = row.p < threshold;
    stats.rows.push_back(std::move(row));
  }
  return stats;
}

std::string render_stats_csv(const GroupStats& stats) {
  std::string out = "feature,t,p,significant\n";
  for (const auto& row : stats.rows) {
    out += row.name;
    out += ',';
    out += fmt6(row.t);
    out += ',';
    out += fmt6(row.p);
    out += ',';
    out += row.significant ? '1' : '0';
    out += '\n';
  }
  return out;
}

EdgeCensus edge_census(const std::vector<std::string>& edges) {
  const auto& layout = ChannelLayout::canonical16();
  EdgeCensus census;
  for (const auto& edge : edges) {
    const auto [i, j] = parse_edge_name(layout, edge);
    switch (edge_kind(layout, i, j)) {
      case EdgeKind::IntraLeft: census.intra_left.push_back(edge); break;
      case EdgeKind::IntraRight: census.intra_right.push_back(edge); break;
      case EdgeKind::Inter: census.inter.push_back(edge); break;
    }
  }
  return census;
}

void to_json(nlohmann::json& j, const EdgeCensus& census) {
  j = nlohmann::json{{"counts",
                      {{"intra_left", census.intra_left.size()},
                       {"intra_right", census.intra_right.size()},
                       {"inter", census.inter.size()}}},
                     {"intra_left", census.intra_left},
                     {"intra_right", census.intra_right},
                     {"inter", census.inter}};
}

std::vector<std::string> filter_pli_names(const std::vector<std::string>& names) {
  std::vector<std::string> out;
  for (const auto& name : names) {
    if (name.rfind("pli:", 0) == 0) out.push_back(name);
  }
  return out;
}

}  // namespace eegdep
