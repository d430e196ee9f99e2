#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <nlohmann/json.hpp>
#include <set>
#include <string>
#include <vector>

#include "eegdep/channels.hpp"
#include "eegdep/connectivity.hpp"
#include "eegdep/dataset.hpp"
#include "eegdep/errors.hpp"
#include "eegdep/evaluation.hpp"
#include "eegdep/feature_table.hpp"
#include "eegdep/pipeline.hpp"
#include "eegdep/rng.hpp"
#include "oracles.hpp"

using namespace eegdep;

namespace {

// Hand table: per-class feature shift, one noise column.
FeatureTable hand_table(const std::vector<std::string>& subjects_nc,
                        const std::vector<std::string>& subjects_mdd, int epochs,
                        std::uint64_t seed) {
  FeatureTable t;
  t.feature_names = {"sig", "noise"};
  const auto n =
      static_cast<Eigen::Index>((subjects_nc.size() + subjects_mdd.size()) *
                                static_cast<std::size_t>(epochs));
  t.values.resize(n, 2);
  Rng rng(seed);
  Eigen::Index r = 0;
  for (const bool mdd : {false, true}) {
    for (const auto& s : (mdd ? subjects_mdd : subjects_nc)) {
      for (int e = 0; e < epochs; ++e) {
        t.subject_ids.push_back(s);
        t.labels.push_back(mdd ? Label::MDD : Label::NC);
        t.epoch_indices.push_back(e);
        t.values(r, 0) = (mdd ? 1.0 : -1.0) + 0.1 * rng.normal();
        t.values(r, 1) = rng.normal();
        ++r;
      }
    }
  }
  return t;
}

FeatureSetSpec spec_all(const FeatureTable& t) {
  return {"All", t.feature_names};
}

// Small extracted table shared by the tests that need real column names.
const FeatureTable& extracted_table() {
  static const FeatureTable table = [] {
    SynthConfig cfg;
    cfg.subjects_per_class = 2;
    cfg.epochs_per_subject = 4;
    cfg.seed = 5;
    cfg.coupling_nc = {{"C3", "P3", 0.8}};
    cfg.coupling_mdd = {{"C3", "P3", 0.2}};
    return extract_feature_table(synth_dataset(cfg), ExtractConfig{});
  }();
  return table;
}

}  // namespace

TEST_CASE("feature blocks classify extraction column names") {
  CHECK(feature_block_of("variance@C3") == FeatureBlock::Linear);
  CHECK(feature_block_of("ar_peak_freq@Fp2") == FeatureBlock::Linear);
  CHECK(feature_block_of("c0@O2") == FeatureBlock::Nonlinear);
  CHECK(feature_block_of("renyi_q2@T5") == FeatureBlock::Nonlinear);
  CHECK(feature_block_of("pli:C3-P3") == FeatureBlock::Pli);
  try {
    feature_block_of("mystery@C3");
    FAIL_CHECK("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownFeature);
  }
}

TEST_CASE("extraction emits 344 ordered columns across the three blocks") {
  const auto& table = extracted_table();
  REQUIRE(table.n_features() == 344);
  CHECK(table.feature_names ==
        extraction_columns(ChannelLayout::canonical16(), ExtractConfig{}));
  for (std::size_t i = 0; i < 128; ++i) {
    CHECK(feature_block_of(table.feature_names[i]) == FeatureBlock::Linear);
  }
  for (std::size_t i = 128; i < 224; ++i) {
    CHECK(feature_block_of(table.feature_names[i]) == FeatureBlock::Nonlinear);
  }
  for (std::size_t i = 224; i < 344; ++i) {
    CHECK(feature_block_of(table.feature_names[i]) == FeatureBlock::Pli);
  }
}

TEST_CASE("feature set tags resolve to the documented dimensions") {
  const auto& names = extracted_table().feature_names;
  const std::vector<std::pair<std::string, std::size_t>> expected = {
      {"L", 128},     {"NL", 96},      {"L+NL", 224},  {"PLI", 120},
      {"L+PLI", 248}, {"NL+PLI", 216}, {"All", 344}};
  CHECK(feature_set_tags().size() == 7);
  for (const auto& [tag, dim] : expected) {
    const auto spec = resolve_feature_set(tag, names);
    CHECK(spec.tag == tag);
    CHECK(spec.columns.size() == dim);
    // Column order follows the table, not the tag tokens.
    std::size_t pos = 0;
    for (const auto& col : spec.columns) {
      const auto it = std::find(names.begin() + static_cast<std::ptrdiff_t>(pos), names.end(), col);
      REQUIRE(it != names.end());
      pos = static_cast<std::size_t>(it - names.begin());
    }
  }
  CHECK(resolve_feature_set("PLI+L", names).columns.size() == 248);
  CHECK_THROWS_AS(resolve_feature_set("+L", names), Error);
  CHECK_THROWS_AS(resolve_feature_set("", names), Error);
  CHECK_THROWS_AS(resolve_feature_set("spectral", names), Error);
}

TEST_CASE("metrics arithmetic and undefined markers") {
  const auto m = metrics({78, 22, 90, 10});
  CHECK(m.accuracy == doctest::Approx(0.84).epsilon(1e-12));
  REQUIRE(m.sensitivity.has_value());
  REQUIRE(m.specificity.has_value());
  CHECK(*m.sensitivity == doctest::Approx(0.78).epsilon(1e-12));
  CHECK(*m.specificity == doctest::Approx(0.90).epsilon(1e-12));

  const auto perfect = metrics({10, 0, 10, 0});
  CHECK(perfect.accuracy == 1.0);
  CHECK(*perfect.sensitivity == 1.0);
  CHECK(*perfect.specificity == 1.0);

  const auto no_pos = metrics({0, 0, 5, 5});
  CHECK_FALSE(no_pos.sensitivity.has_value());
  CHECK(no_pos.specificity.has_value());

  try {
    metrics({0, 0, 0, 0});
    FAIL_CHECK("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyConfusion);
  }

  // accuracy == (sens*P + spec*N) / (P+N) whenever both are defined.
  Rng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const ConfusionCounts c{static_cast<std::int64_t>(rng.below(50) + 1),
                            static_cast<std::int64_t>(rng.below(50)),
                            static_cast<std::int64_t>(rng.below(50) + 1),
                            static_cast<std::int64_t>(rng.below(50))};
    const auto mm = metrics(c);
    const double p = static_cast<double>(c.tp + c.fn);
    const double nn = static_cast<double>(c.tn + c.fp);
    CHECK(mm.accuracy ==
          doctest::Approx((*mm.sensitivity * p + *mm.specificity * nn) / (p + nn))
              .epsilon(1e-12));
  }
}

TEST_CASE("LOSO on 4 subjects x 3 epochs: fold shape and pooled counts") {
  const auto table = hand_table({"A", "B"}, {"C", "D"}, 3, 11);
  EvalConfig cfg;
  const auto report = loso_cv(table, spec_all(table), cfg);

  REQUIRE(report.folds.size() == 4);
  CHECK(report.folds[0].subject_id == "A");
  CHECK(report.folds[1].subject_id == "B");
  CHECK(report.folds[2].subject_id == "C");
  CHECK(report.folds[3].subject_id == "D");

  std::set<std::pair<std::string, int>> seen;
  for (const auto& fold : report.folds) {
    CHECK(fold.predictions.size() == 3);
    for (const auto& p : fold.predictions) {
      CHECK(seen.insert({fold.subject_id, p.epoch_index}).second);
    }
  }
  CHECK(seen.size() == 12);
  CHECK(report.confusion.total() == 12);

  // The planted signal is trivially separable.
  CHECK(report.epoch_metrics.accuracy == 1.0);
  CHECK(report.subject_majority_accuracy == 1.0);
  CHECK(report.model == "LR");
  CHECK(report.selector == "None");

  nlohmann::json j;
  to_json(j, report);
  CHECK(j.contains("featureset"));
  CHECK(j["folds"].size() == 4);
  CHECK(j.contains("confusion"));
  CHECK(j.contains("epoch_metrics"));
  CHECK(j.contains("config_digest"));
}

TEST_CASE("LOSO training state ignores the held-out subject") {
  const auto base = hand_table({"A", "B", "C"}, {"D", "E", "F"}, 4, 21);
  EvalConfig cfg;
  const auto before = loso_cv(base, spec_all(base), cfg);

  // Corrupt every epoch of one subject; its own fold's training fingerprint
  // must not move, everyone else's must.
  auto mutated = base;
  for (Eigen::Index r = 0; r < mutated.n_rows(); ++r) {
    if (mutated.subject_ids[static_cast<std::size_t>(r)] == "C") {
      mutated.values.row(r).array() += 500.0;
    }
  }
  const auto after = loso_cv(mutated, spec_all(mutated), cfg);
  REQUIRE(before.folds.size() == after.folds.size());
  for (std::size_t f = 0; f < before.folds.size(); ++f) {
    REQUIRE(before.folds[f].subject_id == after.folds[f].subject_id);
    if (before.folds[f].subject_id == "C") {
      CHECK(before.folds[f].train_digest == after.folds[f].train_digest);
    } else {
      CHECK(before.folds[f].train_digest != after.folds[f].train_digest);
    }
  }
}

TEST_CASE("LOSO needs two subjects per class and carries fold context") {
  const auto tiny = hand_table({"A"}, {"B", "C"}, 3, 31);
  EvalConfig cfg;
  try {
    loso_cv(tiny, spec_all(tiny), cfg);
    FAIL_CHECK("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooFewSubjects);
  }

  // A selector that cannot run inside a fold names the failing fold.
  const auto table = hand_table({"A", "B"}, {"C", "D"}, 3, 41);
  EvalConfig relieff;
  relieff.selector = SelectorKind::ReliefF;  // k=10 > 6 train rows per class
  try {
    loso_cv(table, spec_all(table), relieff);
    FAIL_CHECK("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooFewInstances);
    CHECK(std::string(e.what()).find("fold A") != std::string::npos);
  }
}

TEST_CASE("grid runs every cell and records failures without aborting") {
  const auto& table = extracted_table();
  EvalConfig base;
  const std::vector<std::string> tags = {"L", "PLI"};
  const std::vector<SelectorKind> selectors = {SelectorKind::None, SelectorKind::InfoGain,
                                               SelectorKind::ReliefF};
  std::vector<ModelSpec> models(2);
  models[0].kind = ModelKind::KNN;
  models[1].kind = ModelKind::NB;

  const auto grid = grid_evaluate(table, tags, selectors, models, base, 2);
  REQUIRE(grid.cells.size() == 12);

  for (std::size_t fs = 0; fs < tags.size(); ++fs) {
    for (std::size_t sel = 0; sel < selectors.size(); ++sel) {
      for (std::size_t mod = 0; mod < models.size(); ++mod) {
        const auto& cell = grid.cell(fs, sel, mod);
        CHECK(cell.featureset == tags[fs]);
        CHECK(cell.selector == selector_name(selectors[sel]));
        CHECK(cell.model == model_kind_name(models[mod].kind));
        if (selectors[sel] == SelectorKind::ReliefF) {
          // 2 subjects/class leaves one class with <= k training rows.
          CHECK_FALSE(cell.ok);
          CHECK_FALSE(cell.error.empty());
        } else {
          CHECK(cell.ok);
          CHECK(cell.error.empty());
          CHECK(cell.epoch_accuracy >= 0.0);
          CHECK(cell.epoch_accuracy <= 1.0);
          if (selectors[sel] == SelectorKind::None) {
            CHECK(cell.mean_selected == (tags[fs] == "L" ? 128.0 : 120.0));
          } else {
            CHECK(cell.mean_selected == 18.0);
          }
        }
      }
    }
  }

  const auto csv = render_grid_csv(grid);
  CHECK(csv.find("feature_set") != std::string::npos);
  CHECK(csv.find("\nL,") != std::string::npos);
  CHECK(csv.find("\nPLI,") != std::string::npos);
  CHECK(csv.find("InfoGain") != std::string::npos);

  nlohmann::json j;
  to_json(j, grid);
  CHECK(j["cells"].size() == 12);

  // A worker pool must not change results.
  const auto serial = grid_evaluate(table, tags, selectors, models, base, 1);
  nlohmann::json js;
  to_json(js, serial);
  CHECK(js.dump() == j.dump());
}

TEST_CASE("Welch t-test endpoints: identical groups and a huge separation") {
  // Subject means: NC {1, 2}, MDD {1, 2}.
  FeatureTable t;
  t.feature_names = {"f"};
  t.values.resize(4, 1);
  t.values << 1.0, 2.0, 1.0, 2.0;
  t.subject_ids = {"a", "b", "c", "d"};
  t.labels = {Label::NC, Label::NC, Label::MDD, Label::MDD};
  t.epoch_indices = {0, 0, 0, 0};
  const auto same = group_ttest(t);
  REQUIRE(same.rows.size() == 1);
  CHECK(same.rows[0].t == 0.0);
  CHECK(same.rows[0].p == 1.0);
  CHECK_FALSE(same.rows[0].significant);
  CHECK(same.divisor == 1.0);

  // 12 vs 12 subject means at 0 +/- 0.1 and 5 +/- 0.1.
  FeatureTable big;
  big.feature_names = {"f"};
  big.values.resize(24, 1);
  for (int i = 0; i < 12; ++i) {
    big.values(i, 0) = (i % 2 == 0 ? -0.1 : 0.1);
    big.values(12 + i, 0) = 5.0 + (i % 2 == 0 ? -0.1 : 0.1);
    big.subject_ids.push_back("n" + std::to_string(i));
    big.labels.push_back(Label::NC);
    big.epoch_indices.push_back(0);
  }
  for (int i = 0; i < 12; ++i) {
    big.subject_ids.push_back("m" + std::to_string(i));
    big.labels.push_back(Label::MDD);
    big.epoch_indices.push_back(0);
  }
  const auto sep = group_ttest(big, 0.05, 344);
  CHECK(sep.divisor == 344.0);
  CHECK(sep.rows[0].t > 0.0);  // MDD minus NC
  CHECK(sep.rows[0].p < 1e-10);
  CHECK(sep.rows[0].significant);

  const auto csv = render_stats_csv(sep);
  CHECK(csv.find("feature") != std::string::npos);
  CHECK(csv.find("\nf,") != std::string::npos);
}

TEST_CASE("Welch t-test handles zero within-group variance") {
  FeatureTable t;
  t.feature_names = {"f"};
  t.values.resize(4, 1);
  t.values << 1.0, 1.0, 2.0, 2.0;
  t.subject_ids = {"a", "b", "c", "d"};
  t.labels = {Label::NC, Label::NC, Label::MDD, Label::MDD};
  t.epoch_indices = {0, 0, 0, 0};
  const auto stats = group_ttest(t);
  CHECK(stats.rows[0].t == std::numeric_limits<double>::infinity());
  CHECK(stats.rows[0].p == 0.0);
  CHECK(stats.rows[0].significant);
}

TEST_CASE("parametric p agrees with a permutation oracle on a moderate effect") {
  Rng rng(13);
  std::vector<double> nc_means, mdd_means;
  for (int i = 0; i < 10; ++i) {
    nc_means.push_back(rng.normal());
    mdd_means.push_back(rng.normal() + 0.55);
  }

  FeatureTable t;
  t.feature_names = {"f"};
  t.values.resize(20, 1);
  for (int i = 0; i < 10; ++i) {
    t.values(i, 0) = nc_means[static_cast<std::size_t>(i)];
    t.values(10 + i, 0) = mdd_means[static_cast<std::size_t>(i)];
    t.subject_ids.push_back("n" + std::to_string(i));
    t.labels.push_back(Label::NC);
    t.epoch_indices.push_back(0);
  }
  for (int i = 0; i < 10; ++i) {
    t.subject_ids.push_back("m" + std::to_string(i));
    t.labels.push_back(Label::MDD);
    t.epoch_indices.push_back(0);
  }
  const auto stats = group_ttest(t);
  const double p_param = stats.rows[0].p;
  REQUIRE(p_param > 0.02);
  REQUIRE(p_param < 0.7);
  const double p_perm = oracle::permutation_p(nc_means, mdd_means, 10000, 99);
  CHECK(std::abs(p_param - p_perm) < 0.01);
}

TEST_CASE("group_ttest ignores row order and aggregates epochs per subject") {
  FeatureTable t;
  t.feature_names = {"f", "g"};
  const int epochs = 4;
  std::vector<std::pair<std::string, Label>> subjects = {
      {"a", Label::NC}, {"b", Label::NC}, {"c", Label::NC},
      {"x", Label::MDD}, {"y", Label::MDD}, {"z", Label::MDD}};
  t.values.resize(static_cast<Eigen::Index>(subjects.size() * epochs), 2);
  Rng rng(77);
  Eigen::Index r = 0;
  for (const auto& [sid, lab] : subjects) {
    for (int e = 0; e < epochs; ++e) {
      t.subject_ids.push_back(sid);
      t.labels.push_back(lab);
      t.epoch_indices.push_back(e);
      t.values(r, 0) = rng.normal() + (lab == Label::MDD ? 0.8 : 0.0);
      t.values(r, 1) = rng.normal();
      ++r;
    }
  }
  const auto direct = group_ttest(t);

  std::vector<Eigen::Index> reversed;
  for (Eigen::Index i = t.n_rows(); i-- > 0;) reversed.push_back(i);
  const auto shuffled = group_ttest(t.select_rows(reversed));
  for (std::size_t f = 0; f < direct.rows.size(); ++f) {
    CHECK(shuffled.rows[f].t == doctest::Approx(direct.rows[f].t).epsilon(1e-12));
    CHECK(shuffled.rows[f].p == doctest::Approx(direct.rows[f].p).epsilon(1e-12));
  }

  try {
    FeatureTable one = t.select_rows({0, 1, 2, 3, 4 * 3 + 0, 4 * 3 + 1, 4 * 3 + 2, 4 * 3 + 3});
    // One subject per class is too few to compare variances.
    group_ttest(one);
    FAIL_CHECK("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooFewSubjects);
  }
}

TEST_CASE("Bonferroni: higher divisors only remove significance") {
  FeatureTable t;
  t.feature_names = {"f0", "f1", "f2", "f3", "f4", "f5"};
  t.values.resize(16, 6);
  Rng rng(31);
  for (int i = 0; i < 16; ++i) {
    const bool mdd = i >= 8;
    t.subject_ids.push_back((mdd ? "m" : "n") + std::to_string(i));
    t.labels.push_back(mdd ? Label::MDD : Label::NC);
    t.epoch_indices.push_back(0);
    for (int f = 0; f < 6; ++f) {
      t.values(i, f) = rng.normal() + (mdd ? 0.4 * f : 0.0);
    }
  }
  const auto strict = group_ttest(t, 0.05, 200);
  const auto loose = group_ttest(t, 0.05, 5);
  for (std::size_t f = 0; f < strict.rows.size(); ++f) {
    CHECK(strict.rows[f].p == loose.rows[f].p);
    if (strict.rows[f].significant) CHECK(loose.rows[f].significant);
  }
}

TEST_CASE("edge census partitions the montage and the reported subsets") {
  const auto& layout = ChannelLayout::canonical16();
  std::vector<std::string> all_edges;
  for (std::size_t i = 0; i < 16; ++i) {
    for (std::size_t j = i + 1; j < 16; ++j) all_edges.push_back(edge_name(layout, i, j));
  }
  const auto full = edge_census(all_edges);
  CHECK(full.intra_left.size() == 28);
  CHECK(full.intra_right.size() == 28);
  CHECK(full.inter.size() == 64);

  const std::vector<std::string> fifteen = {
      "pli:C3-T3", "pli:T3-P3", "pli:F3-F7", "pli:P3-T5", "pli:F7-T3",
      "pli:F7-C3", "pli:T3-T5", "pli:C3-P3", "pli:P4-T6", "pli:O2-P4",
      "pli:O2-T6", "pli:T6-T4", "pli:P4-T4", "pli:F8-F4", "pli:C4-F8"};
  const auto census15 = edge_census(fifteen);
  CHECK(census15.intra_left.size() == 8);
  CHECK(census15.intra_right.size() == 7);
  CHECK(census15.inter.size() == 0);

  const std::vector<std::string> twenty_seven = {
      "pli:Fp1-C3", "pli:Fp1-T3", "pli:Fp1-P3", "pli:F3-F7", "pli:F3-C3", "pli:F3-T3",
      "pli:F3-P3",  "pli:F7-C3",  "pli:F7-T3",  "pli:F7-P3", "pli:F7-T5", "pli:C3-P3",
      "pli:T3-T5",  "pli:P3-T5",  "pli:P3-O1",  "pli:Fp2-P4", "pli:O2-P4", "pli:O2-T6",
      "pli:O2-T4",  "pli:P4-T4",  "pli:C4-F8",  "pli:C4-F4", "pli:Fp1-T4", "pli:T3-P4",
      "pli:P3-P4",  "pli:T5-P4",  "pli:O1-T4"};
  const auto census27 = edge_census(twenty_seven);
  CHECK(census27.intra_left.size() == 15);
  CHECK(census27.intra_right.size() == 7);
  CHECK(census27.inter.size() == 5);

  nlohmann::json j;
  to_json(j, census27);
  CHECK(j["intra_left"].size() == 15);
  CHECK(j["counts"]["inter"].get<int>() == 5);

  try {
    edge_census({"pli:C3-XX"});
    FAIL_CHECK("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownChannel);
  }
}

TEST_CASE("filter_pli_names keeps only connectivity columns, in order") {
  const std::vector<std::string> names = {"variance@C3", "pli:C3-P3", "c0@O2", "pli:F3-F7"};
  CHECK(filter_pli_names(names) == std::vector<std::string>{"pli:C3-P3", "pli:F3-F7"});
  CHECK(filter_pli_names({"variance@C3"}).empty());
}

TEST_CASE("pipeline config round-trips losslessly through JSON") {
  PipelineConfig cfg;
  cfg.synth = SynthConfig{};
  cfg.synth->subjects_per_class = 7;
  cfg.synth->coupling_nc = {{"C3", "P3", 0.6}};
  cfg.selector = SelectorKind::CfsGsw;
  cfg.scope = SelectionScope::Global;
  cfg.featureset = "L+PLI";
  cfg.models.resize(2);
  cfg.models[1].kind = ModelKind::DT;
  cfg.normalization = NormalizationMode::MinMaxSymmetric;
  cfg.bonferroni_divisor = 334;
  cfg.workers = 4;

  nlohmann::json j;
  to_json(j, cfg);
  PipelineConfig back;
  from_json(j, back);
  CHECK(pipeline_config_digest(back) == pipeline_config_digest(cfg));

  nlohmann::json j2;
  to_json(j2, back);
  CHECK(j2.dump() == j.dump());
}

TEST_CASE("pipeline dataset resolution demands exactly one source") {
  PipelineConfig none;
  CHECK_THROWS_AS(resolve_dataset(none), Error);

  PipelineConfig both;
  both.synth = SynthConfig{};
  both.dataset_path = "somewhere.csv";
  CHECK_THROWS_AS(resolve_dataset(both), Error);

  PipelineConfig ok;
  ok.synth = SynthConfig{};
  ok.synth->subjects_per_class = 1;
  ok.synth->epochs_per_subject = 1;
  const auto ds = resolve_dataset(ok);
  CHECK(ds.epochs.size() == 2);
}

TEST_CASE("eval settings derive from the pipeline config") {
  PipelineConfig cfg;
  cfg.selector = SelectorKind::InfoGain;
  cfg.scope = SelectionScope::Global;
  cfg.normalization = NormalizationMode::MinMaxSymmetric;
  try {
    eval_config(cfg);
    FAIL_CHECK("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConfigError);
  }

  cfg.models.resize(2);
  cfg.models[0].kind = ModelKind::NB;
  const auto eval = eval_config(cfg);
  CHECK(eval.selector == SelectorKind::InfoGain);
  CHECK(eval.scope == SelectionScope::Global);
  CHECK(eval.model.kind == ModelKind::NB);
  CHECK(eval.normalization == NormalizationMode::MinMaxSymmetric);

  CHECK(default_grid_models().size() == 4);
  CHECK(default_grid_models()[0].kind == ModelKind::KNN);
}
