#include "eegdep/fir.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "eegdep/errors.hpp"

namespace eegdep {

namespace {

// Windowed-sinc lowpass, normalized to unit gain at DC.
std::vector<double> lowpass_kernel(double cutoff_norm, int taps) {
  const int mid = (taps - 1) / 2;
  std::vector<double> h(static_cast<std::size_t>(taps));
  double sum = 0.0;
  for (int n = 0; n < taps; ++n) {
    const double k = n - mid;
    const double x = 2.0 * cutoff_norm * k;
    const double sinc = (k == 0) ? 1.0 : std::sin(std::numbers::pi * x) / (std::numbers::pi * x);
    const double w = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * n / (taps - 1));
    h[static_cast<std::size_t>(n)] = 2.0 * cutoff_norm * sinc * w;
    sum += h[static_cast<std::size_t>(n)];
  }
  for (auto& v : h) v /= sum;
  return h;
}

std::vector<double> convolve_same(const std::vector<double>& kernel,
                                  std::span<const double> x) {
  const int taps = static_cast<int>(kernel.size());
  const int mid = (taps - 1) / 2;
  const int n = static_cast<int>(x.size());
  std::vector<double> y(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    const int k_lo = std::max(0, i + mid - (n - 1));
    const int k_hi = std::min(taps - 1, i + mid);
    for (int k = k_lo; k <= k_hi; ++k) {
      acc += kernel[static_cast<std::size_t>(k)] * x[static_cast<std::size_t>(i + mid - k)];
    }
    y[static_cast<std::size_t>(i)] = acc;
  }
  return y;
}

}  // namespace

std::vector<double> design_bandpass_kernel(double fs, double lo, double hi, int taps) {
  if (!(lo > 0.0) || lo >= hi || hi >= fs / 2.0) {
    throw Error(ErrorCode::InvalidBand,
                "need 0 < lo < hi < fs/2, got lo=" + std::to_string(lo) +
                    " hi=" + std::to_string(hi) + " fs=" + std::to_string(fs));
  }
  if (taps < 3 || taps % 2 == 0) {
    throw Error(ErrorCode::ConfigError, "taps must be odd and >= 3, got " + std::to_string(taps));
  }
  const auto lp_hi = lowpass_kernel(hi / fs, taps);
  const auto lp_lo = lowpass_kernel(lo / fs, taps);
  std::vector<double> band(static_cast<std::size_t>(taps));
  for (std::size_t i = 0; i < band.size(); ++i) band[i] = lp_hi[i] - lp_lo[i];
  return band;
}

std::vector<double> filtfilt(const std::vector<double>& kernel, std::span<const double> x) {
  auto y = convolve_same(kernel, x);
  std::reverse(y.begin(), y.end());
  y = convolve_same(kernel, y);
  std::reverse(y.begin(), y.end());
  return y;
}

std::vector<double> bandpass_fir(std::span<const double> x, double fs, double lo, double hi,
                                 int taps) {
  const auto kernel = design_bandpass_kernel(fs, lo, hi, taps);
  if (x.size() <= static_cast<std::size_t>(taps)) {
    throw Error(ErrorCode::SignalTooShort,
                "signal of " + std::to_string(x.size()) + " samples needs more than " +
                    std::to_string(taps) + " (taps)");
  }
  return filtfilt(kernel, x);
}

}  // namespace eegdep
