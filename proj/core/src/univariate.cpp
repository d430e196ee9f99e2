#include "eegdep/univariate.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "eegdep/errors.hpp"
#include "eegdep/spectral.hpp"

namespace eegdep {

namespace {

double mean_of(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

// Unbiased sample variance.
double variance_of(std::span<const double> x) {
  const double m = mean_of(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size() - 1);
}

std::vector<double> first_difference(std::span<const double> x) {
  std::vector<double> d(x.size() - 1);
  for (std::size_t i = 0; i + 1 < x.size(); ++i) d[i] = x[i + 1] - x[i];
  return d;
}

std::string format_order(double q) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", q);
  return buf;
}

}  // namespace

BasicStats basic_stats(std::span<const double> x, int p2p_windows) {
  if (x.size() < 8 || x.size() < static_cast<std::size_t>(p2p_windows)) {
    throw Error(ErrorCode::SignalTooShort, "basic_stats needs at least 8 samples");
  }
  BasicStats out{};
  out.variance = variance_of(x);
  double sq = 0.0;
  for (double v : x) sq += v * v;
  out.mean_square = sq / static_cast<double>(x.size());

  // Equal sub-windows; the first (n % windows) windows take one extra sample.
  const std::size_t n = x.size();
  const std::size_t w = static_cast<std::size_t>(p2p_windows);
  const std::size_t base = n / w;
  const std::size_t extra = n % w;
  double p2p_sum = 0.0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < w; ++i) {
    const std::size_t len = base + (i < extra ? 1 : 0);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t t = start; t < start + len; ++t) {
      lo = std::min(lo, x[t]);
      hi = std::max(hi, x[t]);
    }
    p2p_sum += hi - lo;
    start += len;
  }
  out.mean_p2p = p2p_sum / static_cast<double>(w);
  return out;
}

HjorthParams hjorth(std::span<const double> x) {
  if (x.size() < 3) throw Error(ErrorCode::SignalTooShort, "hjorth needs at least 3 samples");
  const double var_x = variance_of(x);
  const auto dx = first_difference(x);
  const double var_dx = variance_of(dx);
  if (var_x <= 0.0 || var_dx <= 0.0) {
    throw Error(ErrorCode::DegenerateSignal, "hjorth parameters undefined for constant signal");
  }
  const auto ddx = first_difference(dx);
  const double var_ddx = variance_of(ddx);

  HjorthParams out{};
  out.activity = var_x;
  out.mobility = std::sqrt(var_dx / var_x);
  out.complexity = std::sqrt(var_ddx / var_dx) / out.mobility;
  return out;
}

BurgModel burg_fit(std::span<const double> x, int order) {
  if (order < 2) throw Error(ErrorCode::ConfigError, "AR order must be >= 2");
  const std::size_t n = x.size();
  if (n <= 2 * static_cast<std::size_t>(order)) {
    throw Error(ErrorCode::SignalTooShort, "Burg fit needs more than 2*order samples");
  }

  std::vector<double> f(x.begin(), x.end());
  std::vector<double> b(x.begin(), x.end());
  std::vector<double> a;  // a_1..a_m under x_t = -sum a_k x_{t-k} + e_t
  double energy = 0.0;
  for (double v : x) energy += v * v;
  energy /= static_cast<double>(n);

  for (int m = 1; m <= order; ++m) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t t = static_cast<std::size_t>(m); t < n; ++t) {
      num += f[t] * b[t - 1];
      den += f[t] * f[t] + b[t - 1] * b[t - 1];
    }
    if (den == 0.0) {
      throw Error(ErrorCode::NumericalInstability, "Burg recursion met zero prediction energy");
    }
    const double k = -2.0 * num / den;
    if (!(std::abs(k) < 1.0)) {
      throw Error(ErrorCode::NumericalInstability,
                  "Burg reflection coefficient left (-1, 1) at stage " + std::to_string(m));
    }

    std::vector<double> a_next(static_cast<std::size_t>(m));
    for (int i = 1; i < m; ++i) {
      a_next[static_cast<std::size_t>(i - 1)] =
          a[static_cast<std::size_t>(i - 1)] + k * a[static_cast<std::size_t>(m - i - 1)];
    }
    a_next[static_cast<std::size_t>(m - 1)] = k;
    a = std::move(a_next);

    for (std::size_t t = n - 1; t >= static_cast<std::size_t>(m); --t) {
      const double f_prev = f[t];
      f[t] = f_prev + k * b[t - 1];
      b[t] = b[t - 1] + k * f_prev;
    }
    energy *= (1.0 - k * k);
  }

  BurgModel model;
  model.coeffs = std::move(a);
  model.noise_var = energy;
  return model;
}

double ar_psd_at(const BurgModel& model, double fs, double f) {
  // One-sided: P(f) = 2*sigma^2 / (fs * |A(e^{-i w})|^2), integrates to the
  // signal variance over [0, fs/2].
  const double w = 2.0 * std::numbers::pi * f / fs;
  std::complex<double> denom(1.0, 0.0);
  for (std::size_t k = 0; k < model.coeffs.size(); ++k) {
    denom += model.coeffs[k] *
             std::exp(std::complex<double>(0.0, -w * static_cast<double>(k + 1)));
  }
  return 2.0 * model.noise_var / (fs * std::norm(denom));
}

ArSpectrumFeatures ar_psd_features(std::span<const double> x, double fs, int order,
                                   double grid_lo, double grid_hi, double grid_step) {
  const auto model = burg_fit(x, order);

  ArSpectrumFeatures out{};
  out.max_psd = -std::numeric_limits<double>::infinity();
  double prev_psd = 0.0;
  double integral = 0.0;
  bool first = true;
  for (double f = grid_lo; f <= grid_hi + 1e-9; f += grid_step) {
    const double p = ar_psd_at(model, fs, f);
    if (p > out.max_psd) {
      out.max_psd = p;
      out.peak_freq = f;
    }
    if (!first) integral += 0.5 * (p + prev_psd) * grid_step;
    prev_psd = p;
    first = false;
  }
  out.psd_integral = integral;
  return out;
}

double spectral_entropy(std::span<const double> x, double fs, double band_lo, double band_hi) {
  if (x.size() < 64) throw Error(ErrorCode::SignalTooShort, "spectral entropy needs >= 64 samples");
  const auto power = power_spectrum(x);
  const std::size_t n = x.size();

  std::vector<double> band;
  for (std::size_t k = 0; k <= n / 2; ++k) {
    const double f = static_cast<double>(k) * fs / static_cast<double>(n);
    if (f >= band_lo && f <= band_hi) band.push_back(power[k]);
  }
  double total = 0.0;
  for (double p : band) total += p;
  if (!(total > 0.0)) {
    throw Error(ErrorCode::DegenerateSignal, "no spectral power in the analysis band");
  }
  double h = 0.0;
  for (double p : band) {
    const double q = p / total;
    if (q > 0.0) h -= q * std::log(q);
  }
  return h / std::log(static_cast<double>(band.size()));
}

double svd_entropy(std::span<const double> x, int m, int tau) {
  if (m < 2 || tau < 1) throw Error(ErrorCode::ConfigError, "svd_entropy needs m >= 2, tau >= 1");
  const std::size_t span_len = static_cast<std::size_t>((m - 1) * tau);
  if (x.size() < static_cast<std::size_t>(m * tau + 10)) {
    throw Error(ErrorCode::SignalTooShort, "svd_entropy needs at least m*tau + 10 samples");
  }
  const std::size_t rows = x.size() - span_len;
  Eigen::MatrixXd traj(static_cast<Eigen::Index>(rows), m);
  for (std::size_t i = 0; i < rows; ++i) {
    for (int j = 0; j < m; ++j) {
      traj(static_cast<Eigen::Index>(i), j) = x[i + static_cast<std::size_t>(j * tau)];
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(traj);
  const auto& sigma = svd.singularValues();
  const double total = sigma.sum();
  if (!(total > 0.0)) {
    throw Error(ErrorCode::DegenerateSignal, "all singular values vanish");
  }
  double h = 0.0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    const double s = sigma[i] / total;
    if (s > 0.0) h -= s * std::log(s);
  }
  return h / std::log(static_cast<double>(m));
}

double c0_complexity(std::span<const double> x) {
  if (x.size() < 64) throw Error(ErrorCode::SignalTooShort, "c0_complexity needs >= 64 samples");
  double energy = 0.0;
  for (double v : x) energy += v * v;
  if (!(energy > 0.0)) {
    throw Error(ErrorCode::DegenerateSignal, "zero-energy input");
  }

  auto spectrum = fft_real(x);
  const std::size_t n = spectrum.size();
  double mean_power = 0.0;
  for (const auto& c : spectrum) mean_power += std::norm(c);
  mean_power /= static_cast<double>(n);

  // Keep only above-mean-power components as the regular part.
  for (auto& c : spectrum) {
    if (std::norm(c) <= mean_power) c = 0.0;
  }
  const auto regular = ifft(spectrum);

  double irregular_energy = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    const double r = x[t] - regular[t].real();
    irregular_energy += r * r;
  }
  return irregular_energy / energy;
}

std::array<double, 3> renyi_entropies(std::span<const double> x, std::array<double, 3> orders,
                                      int bins) {
  if (x.size() < 64) throw Error(ErrorCode::SignalTooShort, "renyi_entropies needs >= 64 samples");
  if (bins < 4) throw Error(ErrorCode::ConfigError, "renyi_entropies needs bins >= 4");
  for (double q : orders) {
    if (!(q > 0.0) || q == 1.0) {
      throw Error(ErrorCode::ConfigError, "Renyi order must be positive and != 1");
    }
  }
  const auto [lo_it, hi_it] = std::minmax_element(x.begin(), x.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (hi == lo) throw Error(ErrorCode::DegenerateSignal, "constant amplitude histogram");

  std::vector<double> counts(static_cast<std::size_t>(bins), 0.0);
  for (double v : x) {
    auto idx = static_cast<std::size_t>((v - lo) / (hi - lo) * bins);
    if (idx >= counts.size()) idx = counts.size() - 1;  // v == max
    counts[idx] += 1.0;
  }

  std::array<double, 3> out{};
  for (std::size_t i = 0; i < orders.size(); ++i) {
    const double q = orders[i];
    double s = 0.0;
    for (double c : counts) {
      if (c > 0.0) s += std::pow(c / static_cast<double>(x.size()), q);
    }
    out[i] = std::log(s) / (1.0 - q);
  }
  return out;
}

const std::vector<std::string>& linear_feature_stems() {
  static const std::vector<std::string> stems = {
      "variance",   "mean_p2p",   "mean_square",  "mobility",
      "complexity", "ar_max_psd", "ar_peak_freq", "ar_psd_integral"};
  return stems;
}

std::vector<std::string> nonlinear_feature_stems(const UnivariateConfig& cfg) {
  std::vector<std::string> stems = {"c0", "svden", "spec_ent"};
  for (double q : cfg.renyi_orders) stems.push_back("renyi_q" + format_order(q));
  return stems;
}

UnivariateBlock extract_univariate(const Epoch& epoch, const ChannelLayout& layout,
                                   const UnivariateConfig& cfg) {
  if (epoch.n_channels() != layout.size()) {
    throw Error(ErrorCode::SchemaError, "epoch channel count does not match layout");
  }

  const std::size_t nch = layout.size();
  const auto lin_stems = linear_feature_stems();
  const auto nl_stems = nonlinear_feature_stems(cfg);

  std::vector<std::vector<double>> per_channel(nch);
  for (std::size_t ch = 0; ch < nch; ++ch) {
    const std::span<const double> x(epoch.samples[ch]);
    try {
      const auto stats = basic_stats(x, cfg.p2p_windows);
      const auto hj = hjorth(x);
      const auto ar = ar_psd_features(x, epoch.fs, cfg.ar_order, cfg.grid_lo, cfg.grid_hi,
                                      cfg.grid_step);
      const double c0 = c0_complexity(x);
      const double svden = svd_entropy(x, cfg.svd_m, cfg.svd_tau);
      const double sent = spectral_entropy(x, epoch.fs, cfg.band_lo, cfg.band_hi);
      const auto renyi = renyi_entropies(x, cfg.renyi_orders, cfg.renyi_bins);
      per_channel[ch] = {stats.variance, stats.mean_p2p,  stats.mean_square, hj.mobility,
                         hj.complexity,  ar.max_psd,      ar.peak_freq,      ar.psd_integral,
                         c0,             svden,           sent,              renyi[0],
                         renyi[1],       renyi[2]};
    } catch (const Error& e) {
      throw Error(e.code(), e.raw_message() + " (channel " + layout.names()[ch] + ")");
    }
  }

  UnivariateBlock block;
  block.names.reserve(nch * 14);
  block.values.reserve(nch * 14);
  for (std::size_t f = 0; f < lin_stems.size(); ++f) {
    for (std::size_t ch = 0; ch < nch; ++ch) {
      block.names.push_back(lin_stems[f] + "@" + layout.names()[ch]);
      block.values.push_back(per_channel[ch][f]);
    }
  }
  for (std::size_t f = 0; f < nl_stems.size(); ++f) {
    for (std::size_t ch = 0; ch < nch; ++ch) {
      block.names.push_back(nl_stems[f] + "@" + layout.names()[ch]);
      block.values.push_back(per_channel[ch][lin_stems.size() + f]);
    }
  }
  return block;
}

}  // namespace eegdep
