#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "eegdep/discretize.hpp"
#include "eegdep/errors.hpp"
#include "eegdep/feature_table.hpp"
#include "eegdep/rng.hpp"
#include "eegdep/selection.hpp"
#include "oracles.hpp"

using namespace eegdep;

namespace {

FeatureTable make_table(const std::vector<std::string>& names,
                        const std::vector<std::vector<double>>& columns,
                        const std::vector<int>& labels01) {
  FeatureTable t;
  t.feature_names = names;
  const auto n = static_cast<Eigen::Index>(labels01.size());
  t.values.resize(n, static_cast<Eigen::Index>(columns.size()));
  for (std::size_t c = 0; c < columns.size(); ++c) {
    for (Eigen::Index r = 0; r < n; ++r) {
      t.values(r, static_cast<Eigen::Index>(c)) = columns[c][static_cast<std::size_t>(r)];
    }
  }
  for (std::size_t r = 0; r < labels01.size(); ++r) {
    t.subject_ids.push_back("S" + std::to_string(r));
    t.labels.push_back(labels01[r] == 0 ? Label::NC : Label::MDD);
    t.epoch_indices.push_back(0);
  }
  return t;
}

std::vector<int> codes_of(const FeatureTable& t, std::size_t col,
                          const std::vector<int>& labels01) {
  std::vector<double> column(static_cast<std::size_t>(t.n_rows()));
  for (std::size_t r = 0; r < column.size(); ++r) {
    column[r] = t.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(col));
  }
  const auto bounds = mdl_discretize(column, labels01);
  return apply_bins(column, bounds);
}

// Random table with two class-shifted features, one duplicate pair, one
// constant column, and noise columns.
FeatureTable random_table(std::uint64_t seed, std::vector<int>& labels01) {
  const std::size_t n = 40;
  labels01.assign(n, 0);
  for (std::size_t r = n / 2; r < n; ++r) labels01[r] = 1;
  Rng rng(seed);
  std::vector<std::vector<double>> cols(8, std::vector<double>(n));
  for (std::size_t r = 0; r < n; ++r) {
    const double cls = static_cast<double>(labels01[r]);
    cols[0][r] = 1.4 * cls + rng.normal();
    cols[1][r] = 0.8 * cls + rng.normal();
    cols[2][r] = rng.normal();
    cols[3][r] = rng.normal();
    cols[4][r] = rng.normal() * 3.0;
    cols[5][r] = rng.uniform();
    cols[7][r] = 0.25;
  }
  cols[6] = cols[0];
  return make_table({"a", "b", "c", "d", "e", "f", "g", "h"}, cols, labels01);
}

}  // namespace

TEST_CASE("mdl_discretize finds the single perfect boundary") {
  const std::vector<double> column = {1, 2, 3, 4, 6, 7, 8, 9};
  const std::vector<int> labels = {0, 0, 0, 0, 1, 1, 1, 1};
  const auto bounds = mdl_discretize(column, labels);
  REQUIRE(bounds.size() == 1);
  CHECK(bounds[0] == doctest::Approx(5.0));

  CHECK(mdl_discretize(std::vector<double>(10, 3.0), std::vector<int>(10, 0)).empty());
}

TEST_CASE("mdl_discretize keeps shuffled labels unsplit almost always") {
  int zero_boundary = 0;
  const int trials = 100;
  for (int t = 0; t < trials; ++t) {
    Rng rng(500 + static_cast<std::uint64_t>(t));
    std::vector<double> column(40);
    std::vector<int> labels(40);
    for (std::size_t i = 0; i < column.size(); ++i) {
      column[i] = rng.normal();
      labels[i] = i < 20 ? 0 : 1;
    }
    rng.shuffle(labels);
    if (mdl_discretize(column, labels).empty()) ++zero_boundary;
  }
  CHECK(zero_boundary >= 95);
}

TEST_CASE("mdl_discretize agrees with the recursive oracle on random columns") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(1000 + seed);
    std::vector<double> column(30);
    std::vector<int> labels(30);
    for (std::size_t i = 0; i < column.size(); ++i) {
      // Mild class shift so splits are sometimes accepted.
      labels[i] = i % 2 == 0 ? 0 : 1;
      column[i] = rng.normal() + 0.9 * static_cast<double>(labels[i]);
    }
    const auto got = mdl_discretize(column, labels);
    const auto expected = oracle::mdl_boundaries(column, labels);
    REQUIRE(got.size() == expected.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      CHECK(got[i] == doctest::Approx(expected[i]).epsilon(1e-9));
    }
  }
}

TEST_CASE("apply_bins counts boundaries strictly below the value") {
  const std::vector<double> boundaries = {1.0, 2.0};
  const std::vector<double> values = {0.5, 1.0, 1.5, 2.0, 2.5};
  const auto bins = apply_bins(values, boundaries);
  CHECK(bins == std::vector<int>{0, 0, 1, 1, 2});
  CHECK(apply_bins(values, {}) == std::vector<int>(5, 0));
}

TEST_CASE("symmetrical uncertainty endpoints via the cache") {
  // a = labels, na = not(labels), i = independent product table, k = constant.
  std::vector<int> labels;
  std::vector<double> a, na, ind, cons;
  for (int r = 0; r < 16; ++r) {
    const int y = r < 8 ? 0 : 1;
    labels.push_back(y);
    a.push_back(y);
    na.push_back(1 - y);
    ind.push_back(r % 2);
    cons.push_back(0.5);
  }
  const auto table = make_table({"a", "i", "k", "na"}, {a, ind, cons, na}, labels);
  const auto cache = build_su_cache(table);
  REQUIRE(cache.names == table.feature_names);
  CHECK(cache.feature_class(0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cache.feature_class(3) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cache.feature_class(1) == doctest::Approx(0.0));
  CHECK(cache.feature_class(2) == doctest::Approx(0.0));
  // Bijective pair is fully redundant; symmetry is exact.
  CHECK(cache.feature_feature(0, 3) == doctest::Approx(1.0).epsilon(1e-12));
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (i == j) continue;
      CHECK(cache.feature_feature(i, j) == cache.feature_feature(j, i));
      CHECK(cache.feature_feature(i, j) >= 0.0);
      CHECK(cache.feature_feature(i, j) <= 1.0);
    }
  }
}

TEST_CASE("info_gain_rank matches hand-computed gains on a toy table") {
  std::vector<int> labels;
  std::vector<double> a, b, c;
  for (int r = 0; r < 16; ++r) {
    const int y = r < 8 ? 0 : 1;
    labels.push_back(y);
    a.push_back(y);
    b.push_back((r == 7 || r == 15) ? 1 - y : y);  // two flips
    c.push_back(0.25);
  }
  const auto table = make_table({"a", "b", "c"}, {a, b, c}, labels);
  SelectionConfig cfg;
  cfg.top_n = 2;
  const auto result = info_gain_rank(table, cfg);
  CHECK(result.method == "InfoGain");
  REQUIRE(result.ranked.size() == 3);
  CHECK(result.n_selected == 2);
  CHECK(result.selected() == std::vector<std::string>{"a", "b"});

  // Each binary bin holds 7 majority and 1 minority label.
  const double h_bin = 0.125 * std::log2(8.0) + 0.875 * std::log2(8.0 / 7.0);
  CHECK(result.ranked[0].name == "a");
  CHECK(result.ranked[0].score == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(result.ranked[1].name == "b");
  CHECK(result.ranked[1].score == doctest::Approx(1.0 - h_bin).epsilon(1e-9));
  CHECK(result.ranked[2].name == "c");
  CHECK(result.ranked[2].score == doctest::Approx(0.0));
}

TEST_CASE("info_gain_rank breaks score ties by ascending name") {
  std::vector<int> labels;
  std::vector<double> x;
  for (int r = 0; r < 12; ++r) {
    labels.push_back(r < 6 ? 0 : 1);
    x.push_back(labels.back());
  }
  const auto table = make_table({"zz", "aa"}, {x, x}, labels);
  const auto result = info_gain_rank(table);
  CHECK(result.ranked[0].name == "aa");
  CHECK(result.ranked[1].name == "zz");
  CHECK(result.n_selected == 2);  // top_n larger than the table
}

TEST_CASE("cfs_merit arithmetic on a hand-built cache") {
  SuCache cache;
  cache.names = {"a", "b"};
  cache.feature_class.resize(2);
  cache.feature_class << 0.8, 0.8;
  cache.feature_feature.resize(2, 2);
  cache.feature_feature << 1.0, 1.0, 1.0, 1.0;
  CHECK(cfs_merit({}, cache) == 0.0);
  CHECK(cfs_merit({0}, cache) == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(cfs_merit({0, 1}, cache) == doctest::Approx(0.8).epsilon(1e-12));

  cache.feature_class << 0.5, 0.5;
  cache.feature_feature << 1.0, 0.0, 0.0, 1.0;
  CHECK(cfs_merit({0, 1}, cache) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));

  cache.feature_feature(0, 1) = std::numeric_limits<double>::quiet_NaN();
  try {
    cfs_merit({0, 1}, cache);
    FAIL_CHECK("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MissingCorrelation);
  }
}

TEST_CASE("greedy CFS keeps complementary features and drops a redundant copy") {
  std::vector<int> labels;
  std::vector<double> f1, f2;
  for (int r = 0; r < 32; ++r) {
    const int y = r < 16 ? 0 : 1;
    labels.push_back(y);
    const bool flip1 = (r == 0 || r == 1 || r == 16 || r == 17);
    const bool flip2 = (r == 8 || r == 9 || r == 24 || r == 25);
    f1.push_back(flip1 ? 1 - y : y);
    f2.push_back(flip2 ? 1 - y : y);
  }
  const auto table = make_table({"a", "b", "copy"}, {f1, f2, f1}, labels);
  const auto result = cfs_greedy_stepwise(table);
  CHECK(result.method == "CFS-GSW");
  REQUIRE(result.n_selected == 2);
  CHECK(result.selected() == std::vector<std::string>{"a", "b"});

  // Merit at each addition is strictly increasing.
  REQUIRE(result.ranked.size() == 2);
  CHECK(result.ranked[1].score > result.ranked[0].score);

  // Exhaustive oracle over every subset of size <= 3 confirms the greedy
  // subset is the global optimum here.
  std::vector<int> ycodes = labels;
  std::vector<std::vector<int>> codes;
  for (std::size_t c = 0; c < 3; ++c) codes.push_back(codes_of(table, c, labels));
  std::vector<double> su_class(3);
  std::vector<std::vector<double>> su_ff(3, std::vector<double>(3, 0.0));
  for (std::size_t i = 0; i < 3; ++i) {
    su_class[i] = oracle::su_of_codes(codes[i], ycodes);
    for (std::size_t j = 0; j < 3; ++j) {
      if (i != j) su_ff[i][j] = oracle::su_of_codes(codes[i], codes[j]);
    }
  }
  double best = 0.0;
  std::vector<std::size_t> best_subset;
  for (unsigned mask = 1; mask < 8; ++mask) {
    std::vector<std::size_t> subset;
    for (std::size_t f = 0; f < 3; ++f) {
      if (mask & (1u << f)) subset.push_back(f);
    }
    const double m = oracle::merit_of_subset(subset, su_class, su_ff);
    if (m > best) {
      best = m;
      best_subset = subset;
    }
  }
  CHECK(best_subset == std::vector<std::size_t>{0, 1});
  CHECK(result.ranked.back().score == doctest::Approx(best).epsilon(1e-9));
}

TEST_CASE("greedy CFS on single-signal and all-constant tables") {
  std::vector<int> labels;
  std::vector<double> good, n1, n2;
  Rng rng(77);
  for (int r = 0; r < 20; ++r) {
    const int y = r < 10 ? 0 : 1;
    labels.push_back(y);
    good.push_back(y);
    n1.push_back(0.1);
    n2.push_back(rng.normal());
  }
  const auto table = make_table({"good", "n1", "n2"}, {good, n1, n2}, labels);
  const auto result = cfs_greedy_stepwise(table);
  REQUIRE(result.n_selected == 1);
  CHECK(result.selected() == std::vector<std::string>{"good"});
  CHECK(result.ranked[0].score == doctest::Approx(1.0).epsilon(1e-12));

  const auto flat = make_table({"x", "y"}, {n1, n1}, labels);
  const auto empty = cfs_greedy_stepwise(flat);
  CHECK(empty.n_selected == 0);
  CHECK(empty.ranked.empty());
  CHECK(empty.selected().empty());
}

TEST_CASE("relieff separates clustered classes and zeroes constant features") {
  std::vector<int> labels = {0, 0, 0, 0, 1, 1, 1, 1};
  std::vector<double> sep = {0.0, 0.01, 0.02, 0.03, 1.0, 1.01, 1.02, 1.03};
  std::vector<double> cons(8, 0.7);
  const auto table = make_table({"cons", "sep"}, {cons, sep}, labels);
  SelectionConfig cfg;
  cfg.relieff_k = 3;
  cfg.top_n = 1;
  const auto result = relieff_rank(table, cfg);
  CHECK(result.method == "ReliefF");
  CHECK(result.ranked[0].name == "sep");
  CHECK(result.ranked[0].score > 0.0);
  CHECK(result.ranked[1].score == 0.0);
  CHECK(result.selected() == std::vector<std::string>{"sep"});

  // Duplicating every row leaves the constant feature at exactly zero.
  auto doubled_labels = labels;
  doubled_labels.insert(doubled_labels.end(), labels.begin(), labels.end());
  auto sep2 = sep;
  sep2.insert(sep2.end(), sep.begin(), sep.end());
  const auto doubled =
      make_table({"cons", "sep"}, {std::vector<double>(16, 0.7), sep2}, doubled_labels);
  const auto result2 = relieff_rank(doubled, cfg);
  CHECK(result2.ranked[1].score == 0.0);
  CHECK(result2.ranked[0].score > 0.0);

  // Fixed configuration is bit-deterministic.
  const auto again = relieff_rank(table, cfg);
  for (std::size_t i = 0; i < again.ranked.size(); ++i) {
    CHECK(again.ranked[i].score == result.ranked[i].score);
    CHECK(again.ranked[i].name == result.ranked[i].name);
  }
}

TEST_CASE("relieff requires more instances than neighbors per class") {
  std::vector<int> labels = {0, 0, 0, 0, 1, 1, 1, 1};
  std::vector<double> x = {0, 1, 2, 3, 4, 5, 6, 7};
  const auto table = make_table({"x"}, {x}, labels);
  SelectionConfig cfg;
  cfg.relieff_k = 4;
  try {
    relieff_rank(table, cfg);
    FAIL_CHECK("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooFewInstances);
  }
}

TEST_CASE("relieff weights stay in range and survive row permutation") {
  std::vector<int> labels01;
  const auto table = random_table(31, labels01);
  SelectionConfig cfg;
  cfg.relieff_k = 5;
  const auto result = relieff_rank(table, cfg);
  for (const auto& sf : result.ranked) {
    CHECK(sf.score >= -1.0);
    CHECK(sf.score <= 1.0);
  }

  // Reverse the rows; full-pass weights are order-independent.
  std::vector<Eigen::Index> reversed;
  for (Eigen::Index r = table.n_rows(); r-- > 0;) reversed.push_back(r);
  const auto permuted = relieff_rank(table.select_rows(reversed), cfg);
  for (const auto& sf : result.ranked) {
    const auto match = std::find_if(permuted.ranked.begin(), permuted.ranked.end(),
                                    [&](const ScoredFeature& o) { return o.name == sf.name; });
    REQUIRE(match != permuted.ranked.end());
    CHECK(match->score == doctest::Approx(sf.score).epsilon(1e-12));
  }
}

TEST_CASE("selector scores match brute-force oracles on random tables") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::vector<int> labels01;
    const auto table = random_table(9000 + seed, labels01);
    const std::size_t nf = static_cast<std::size_t>(table.n_features());

    std::vector<std::vector<int>> codes;
    for (std::size_t c = 0; c < nf; ++c) codes.push_back(codes_of(table, c, labels01));

    // Symmetrical uncertainty cache vs oracle.
    const auto cache = build_su_cache(table);
    for (std::size_t i = 0; i < nf; ++i) {
      CHECK(cache.feature_class(static_cast<Eigen::Index>(i)) ==
            doctest::Approx(oracle::su_of_codes(codes[i], labels01)).epsilon(1e-9));
      for (std::size_t j = i + 1; j < nf; ++j) {
        CHECK(cache.feature_feature(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) ==
              doctest::Approx(oracle::su_of_codes(codes[i], codes[j])).epsilon(1e-9));
      }
    }

    // Information gain vs oracle.
    const auto ig = info_gain_rank(table);
    for (const auto& sf : ig.ranked) {
      const auto col = static_cast<std::size_t>(table.column_index(sf.name));
      CHECK(sf.score ==
            doctest::Approx(oracle::info_gain_of_codes(codes[col], labels01)).epsilon(1e-9));
      CHECK(sf.score >= 0.0);
    }

    // Full-pass ReliefF vs oracle.
    SelectionConfig cfg;
    cfg.relieff_k = 7;
    const auto rf = relieff_rank(table, cfg);
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(table.n_rows()),
                                          std::vector<double>(nf));
    for (Eigen::Index r = 0; r < table.n_rows(); ++r) {
      for (Eigen::Index c = 0; c < table.n_features(); ++c) {
        rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = table.values(r, c);
      }
    }
    const auto oracle_w = oracle::relieff_weights(rows, labels01, cfg.relieff_k);
    for (const auto& sf : rf.ranked) {
      const auto col = static_cast<std::size_t>(table.column_index(sf.name));
      CHECK(sf.score == doctest::Approx(oracle_w[col]).epsilon(1e-9));
    }

    // Greedy CFS: merit at each prefix matches the oracle, the sequence is
    // strictly increasing, and dropping any member lowers the merit.
    std::vector<double> su_class(nf);
    std::vector<std::vector<double>> su_ff(nf, std::vector<double>(nf, 0.0));
    for (std::size_t i = 0; i < nf; ++i) {
      su_class[i] = oracle::su_of_codes(codes[i], labels01);
      for (std::size_t j = 0; j < nf; ++j) {
        if (i != j) su_ff[i][j] = oracle::su_of_codes(codes[i], codes[j]);
      }
    }
    const auto gsw = cfs_greedy_stepwise(table);
    std::vector<std::size_t> prefix;
    double prev = 0.0;
    for (const auto& sf : gsw.ranked) {
      prefix.push_back(static_cast<std::size_t>(table.column_index(sf.name)));
      CHECK(sf.score ==
            doctest::Approx(oracle::merit_of_subset(prefix, su_class, su_ff)).epsilon(1e-9));
      CHECK(sf.score > prev);
      prev = sf.score;
    }
    const double final_merit = prefix.empty() ? 0.0 : prev;
    for (std::size_t drop = 0; drop < prefix.size(); ++drop) {
      auto reduced = prefix;
      reduced.erase(reduced.begin() + static_cast<std::ptrdiff_t>(drop));
      CHECK(oracle::merit_of_subset(reduced, su_class, su_ff) <= final_merit + 1e-12);
    }
  }
}

TEST_CASE("run_selector dispatch and None passthrough") {
  std::vector<int> labels01;
  const auto table = random_table(4, labels01);
  const auto none = run_selector(SelectorKind::None, table);
  CHECK(none.method == "None");
  REQUIRE(none.ranked.size() == static_cast<std::size_t>(table.n_features()));
  CHECK(none.n_selected == table.n_features());
  for (std::size_t i = 0; i < none.ranked.size(); ++i) {
    CHECK(none.ranked[i].name == table.feature_names[i]);
    CHECK(none.ranked[i].score == 0.0);
  }

  CHECK(run_selector(SelectorKind::InfoGain, table).method == "InfoGain");
  CHECK(run_selector(SelectorKind::ReliefF, table).method == "ReliefF");
  CHECK(run_selector(SelectorKind::CfsGsw, table).method == "CFS-GSW");
}

TEST_CASE("selector names parse case-insensitively") {
  CHECK(parse_selector("none") == SelectorKind::None);
  CHECK(parse_selector("CFS-GSW") == SelectorKind::CfsGsw);
  CHECK(parse_selector("cfs-gsw") == SelectorKind::CfsGsw);
  CHECK(parse_selector("infogain") == SelectorKind::InfoGain);
  CHECK(parse_selector("RELIEFF") == SelectorKind::ReliefF);
  CHECK(std::string(selector_name(SelectorKind::CfsGsw)) == "CFS-GSW");
  try {
    parse_selector("pca");
    FAIL_CHECK("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConfigError);
  }
}

TEST_CASE("selection results serialize with method, scores, and config") {
  std::vector<int> labels01;
  const auto table = random_table(2, labels01);
  const auto result = info_gain_rank(table);
  nlohmann::json j = result;
  CHECK(j["method"] == "InfoGain");
  CHECK(j["n_selected"].get<int>() == result.n_selected);
  REQUIRE(j["ranked"].is_array());
  CHECK(j["ranked"].size() == result.ranked.size());
  CHECK(j["ranked"][0].contains("name"));
  CHECK(j["ranked"][0].contains("score"));
  CHECK(j["config"].contains("top_n"));
}
