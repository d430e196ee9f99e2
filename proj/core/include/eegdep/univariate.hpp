#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "eegdep/channels.hpp"
#include "eegdep/signal.hpp"

namespace eegdep {

struct BasicStats {
  double variance;     // unbiased sample variance
  double mean_square;  // mean of x^2
  double mean_p2p;     // mean of (max - min) over equal sub-windows
};

BasicStats basic_stats(std::span<const double> x, int p2p_windows = 8);

struct HjorthParams {
  double activity;
  double mobility;    // radians/sample
  double complexity;
};

HjorthParams hjorth(std::span<const double> x);

// Burg lattice fit of an AR(order) model. coeffs are a_1..a_order in
// x_t = -sum a_k x_{t-k} + e_t; noise_var is the driving variance.
struct BurgModel {
  std::vector<double> coeffs;
  double noise_var{0.0};
};

BurgModel burg_fit(std::span<const double> x, int order);

// One-sided AR power spectral density at frequency f (Hz); integrates to the
// signal variance over [0, fs/2].
double ar_psd_at(const BurgModel& model, double fs, double f);

struct ArSpectrumFeatures {
  double max_psd;
  double peak_freq;
  double psd_integral;  // trapezoid over the evaluation grid
};

ArSpectrumFeatures ar_psd_features(std::span<const double> x, double fs, int order = 10,
                                   double grid_lo = 1.0, double grid_hi = 40.0,
                                   double grid_step = 0.5);

// Normalized Shannon entropy of the periodogram restricted to [band_lo, band_hi] Hz.
double spectral_entropy(std::span<const double> x, double fs, double band_lo = 1.0,
                        double band_hi = 40.0);

// Shannon entropy of normalized singular values of the delay-embedding
// trajectory matrix (dimension m, delay tau), normalized by ln m.
double svd_entropy(std::span<const double> x, int m = 20, int tau = 1);

// Fraction of signal energy left after removing spectral components whose
// power exceeds the mean spectral power.
double c0_complexity(std::span<const double> x);

// Renyi entropies of the amplitude histogram at the three given orders.
std::array<double, 3> renyi_entropies(std::span<const double> x,
                                      std::array<double, 3> orders = {0.5, 2.0, 3.0},
                                      int bins = 16);

struct UnivariateConfig {
  int ar_order{10};
  double grid_lo{1.0};
  double grid_hi{40.0};
  double grid_step{0.5};
  double band_lo{1.0};
  double band_hi{40.0};
  int svd_m{20};
  int svd_tau{1};
  std::array<double, 3> renyi_orders{0.5, 2.0, 3.0};
  int renyi_bins{16};
  int p2p_windows{8};
};

// One named value per (feature, channel): 8 linear + 6 nonlinear per channel.
struct UnivariateBlock {
  std::vector<std::string> names;
  std::vector<double> values;
};

// The 8 linear then 6 nonlinear feature name stems, in output order.
const std::vector<std::string>& linear_feature_stems();
std::vector<std::string> nonlinear_feature_stems(const UnivariateConfig& cfg = {});

UnivariateBlock extract_univariate(const Epoch& epoch, const ChannelLayout& layout,
                                   const UnivariateConfig& cfg = {});

}  // namespace eegdep
