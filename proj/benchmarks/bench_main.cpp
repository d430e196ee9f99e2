// Microbenchmarks for the extraction and learning hot paths.

#include <benchmark/benchmark.h>

#include <Eigen/Dense>
#include <vector>

#include "eegdep/channels.hpp"
#include "eegdep/classifiers.hpp"
#include "eegdep/connectivity.hpp"
#include "eegdep/feature_table.hpp"
#include "eegdep/fir.hpp"
#include "eegdep/rng.hpp"
#include "eegdep/selection.hpp"
#include "eegdep/signal.hpp"
#include "eegdep/univariate.hpp"

namespace {

std::vector<double> noise_signal(std::size_t n, std::uint64_t seed) {
  eegdep::Rng rng(seed);
  std::vector<double> x(n);
  for (auto& v : x) v = rng.normal();
  return x;
}

eegdep::Epoch noise_epoch(std::uint64_t seed) {
  eegdep::Epoch ep;
  ep.subject_id = "s0";
  ep.samples.assign(16, {});
  for (std::size_t ch = 0; ch < ep.samples.size(); ++ch) {
    ep.samples[ch] = noise_signal(500, seed + ch);
  }
  return ep;
}

eegdep::FeatureTable noise_table(int rows, int cols, std::uint64_t seed) {
  eegdep::FeatureTable t;
  eegdep::Rng rng(seed);
  for (int f = 0; f < cols; ++f) t.feature_names.push_back("f" + std::to_string(f));
  t.values.resize(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const bool mdd = r % 2 == 1;
    t.subject_ids.push_back("s" + std::to_string(r));
    t.labels.push_back(mdd ? eegdep::Label::MDD : eegdep::Label::NC);
    t.epoch_indices.push_back(0);
    const double shift = mdd ? 0.3 : -0.3;
    for (int f = 0; f < cols; ++f) t.values(r, f) = shift + rng.normal();
  }
  return t;
}

void bm_bandpass(benchmark::State& state) {
  const auto x = noise_signal(500, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(eegdep::bandpass_fir(x, 250.0, 1.0, 40.0));
  }
}
BENCHMARK(bm_bandpass);

void bm_pli_matrix(benchmark::State& state) {
  const auto ep = noise_epoch(2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(eegdep::pli_matrix(ep));
  }
}
BENCHMARK(bm_pli_matrix);

void bm_univariate(benchmark::State& state) {
  const auto ep = noise_epoch(3);
  const auto& layout = eegdep::ChannelLayout::canonical16();
  for (auto _ : state) {
    benchmark::DoNotOptimize(eegdep::extract_univariate(ep, layout));
  }
}
BENCHMARK(bm_univariate);

void bm_relieff(benchmark::State& state) {
  const auto table = noise_table(200, 50, 4);
  eegdep::SelectionConfig cfg;
  cfg.relieff_k = 10;
  cfg.relieff_m = -1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(eegdep::relieff_rank(table, cfg));
  }
}
BENCHMARK(bm_relieff);

void bm_train_lr(benchmark::State& state) {
  const auto table = noise_table(200, 50, 5);
  eegdep::ModelSpec spec;
  spec.kind = eegdep::ModelKind::LR;
  for (auto _ : state) {
    benchmark::DoNotOptimize(eegdep::train(spec, table.values, table.labels));
  }
}
BENCHMARK(bm_train_lr);

}  // namespace

BENCHMARK_MAIN();
