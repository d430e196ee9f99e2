#include "eegdep/connectivity.hpp"

#include <cmath>
#include <numbers>

#include "eegdep/errors.hpp"
#include "eegdep/spectral.hpp"

namespace eegdep {

namespace {

double wrap_phase(double d) {
  d = std::fmod(d, 2.0 * std::numbers::pi);
  if (d > std::numbers::pi) d -= 2.0 * std::numbers::pi;
  if (d <= -std::numbers::pi) d += 2.0 * std::numbers::pi;
  return d;
}

}  // namespace

std::vector<std::complex<double>> analytic_signal(std::span<const double> x) {
  if (x.size() < 16) {
    throw Error(ErrorCode::SignalTooShort, "analytic signal needs at least 16 samples");
  }
  double mean = 0.0;
  for (const double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  bool constant = true;
  std::vector<double> centered(x.size());
  for (std::size_t t = 0; t < x.size(); ++t) {
    centered[t] = x[t] - mean;
    if (x[t] != x[0]) constant = false;
  }
  if (constant) {
    throw Error(ErrorCode::DegenerateSignal, "constant signal has no phase");
  }
  auto spectrum = fft_real(centered);
  const std::size_t n = spectrum.size();
  const std::size_t half = n / 2;
  for (std::size_t k = 1; k < n; ++k) {
    if (n % 2 == 0 && k == half) continue;  // Nyquist stays
    if (k < half || (n % 2 == 1 && k == half)) {
      spectrum[k] *= 2.0;
    } else {
      spectrum[k] = 0.0;
    }
  }
  return ifft(spectrum);
}

std::vector<double> instantaneous_phase(std::span<const double> x) {
  const auto analytic = analytic_signal(x);
  std::vector<double> phase(analytic.size());
  for (std::size_t t = 0; t < analytic.size(); ++t) phase[t] = std::arg(analytic[t]);
  return phase;
}

double pli_pair(std::span<const double> phase_a, std::span<const double> phase_b) {
  if (phase_a.size() != phase_b.size()) {
    throw Error(ErrorCode::LengthMismatch, "phase series lengths differ: " +
                                               std::to_string(phase_a.size()) + " vs " +
                                               std::to_string(phase_b.size()));
  }
  if (phase_a.empty()) {
    throw Error(ErrorCode::SignalTooShort, "empty phase series");
  }
  double sum = 0.0;
  for (std::size_t t = 0; t < phase_a.size(); ++t) {
    const double d = wrap_phase(phase_a[t] - phase_b[t]);
    if (d > 0.0) sum += 1.0;
    else if (d < 0.0) sum -= 1.0;
  }
  return std::abs(sum / static_cast<double>(phase_a.size()));
}

Eigen::MatrixXd pli_matrix(const Epoch& epoch, double trim_frac) {
  if (trim_frac < 0.0 || trim_frac >= 0.5) {
    throw Error(ErrorCode::ConfigError, "trim fraction must lie in [0, 0.5)");
  }
  const std::size_t nch = epoch.n_channels();
  const std::size_t len = epoch.n_samples();
  const auto trim = static_cast<std::size_t>(std::floor(trim_frac * static_cast<double>(len)));
  if (len < 2 * trim + 10) {
    throw Error(ErrorCode::SignalTooShort,
                "epoch too short for phase trimming: " + std::to_string(len) + " samples");
  }

  std::vector<std::vector<double>> phases(nch);
  for (std::size_t ch = 0; ch < nch; ++ch) {
    try {
      auto full = instantaneous_phase(epoch.samples[ch]);
      phases[ch].assign(full.begin() + static_cast<std::ptrdiff_t>(trim),
                        full.end() - static_cast<std::ptrdiff_t>(trim));
    } catch (const Error& e) {
      const auto& layout = ChannelLayout::canonical16();
      const std::string tag =
          nch == layout.size() ? layout.names()[ch] : std::to_string(ch);
      throw Error(e.code(), e.raw_message() + " (channel " + tag + ")");
    }
  }

  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(nch),
                                              static_cast<Eigen::Index>(nch));
  for (std::size_t i = 0; i < nch; ++i) {
    for (std::size_t j = i + 1; j < nch; ++j) {
      const double v = pli_pair(phases[i], phases[j]);
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
      out(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
    }
  }
  return out;
}

EdgeKind edge_kind(const ChannelLayout& layout, std::size_t i, std::size_t j) {
  const auto hi = layout.hemisphere(i);
  const auto hj = layout.hemisphere(j);
  if (hi != hj) return EdgeKind::Inter;
  return hi == Hemisphere::Left ? EdgeKind::IntraLeft : EdgeKind::IntraRight;
}

const char* edge_kind_name(EdgeKind kind) {
  switch (kind) {
    case EdgeKind::IntraLeft: return "intra_left";
    case EdgeKind::IntraRight: return "intra_right";
    case EdgeKind::Inter: return "inter";
  }
  return "unknown";
}

std::string edge_name(const ChannelLayout& layout, std::size_t i, std::size_t j) {
  if (i > j) std::swap(i, j);
  return "pli:" + layout.names()[i] + "-" + layout.names()[j];
}

std::pair<std::size_t, std::size_t> parse_edge_name(const ChannelLayout& layout,
                                                    const std::string& name) {
  if (name.rfind("pli:", 0) != 0) {
    throw Error(ErrorCode::UnknownFeature, "not a connectivity edge name: " + name);
  }
  const auto body = name.substr(4);
  const auto dash = body.find('-');
  if (dash == std::string::npos || dash == 0 || dash + 1 >= body.size()) {
    throw Error(ErrorCode::UnknownFeature, "malformed connectivity edge name: " + name);
  }
  const auto a = layout.index_of(body.substr(0, dash));
  const auto b = layout.index_of(body.substr(dash + 1));
  if (!a || !b) {
    throw Error(ErrorCode::UnknownChannel, "edge endpoint is not a layout channel: " + name);
  }
  if (*a == *b) {
    throw Error(ErrorCode::UnknownFeature, "degenerate self edge: " + name);
  }
  return *a < *b ? std::make_pair(*a, *b) : std::make_pair(*b, *a);
}

ConnectivityBlock vectorize_upper(const Eigen::MatrixXd& m, const ChannelLayout& layout) {
  const auto nch = static_cast<Eigen::Index>(layout.size());
  if (m.rows() != nch || m.cols() != nch) {
    throw Error(ErrorCode::ArityMismatch,
                "connectivity matrix shape does not match the channel layout");
  }
  ConnectivityBlock block;
  block.names.reserve(layout.size() * (layout.size() - 1) / 2);
  block.values.reserve(layout.size() * (layout.size() - 1) / 2);
  for (Eigen::Index i = 0; i < nch; ++i) {
    for (Eigen::Index j = i + 1; j < nch; ++j) {
      block.names.push_back(edge_name(layout, static_cast<std::size_t>(i),
                                      static_cast<std::size_t>(j)));
      block.values.push_back(m(i, j));
    }
  }
  return block;
}

ConnectivityBlock extract_connectivity(const Epoch& epoch, const ChannelLayout& layout,
                                       double trim_frac) {
  if (epoch.n_channels() != layout.size()) {
    throw Error(ErrorCode::SchemaError, "epoch channel count does not match layout");
  }
  return vectorize_upper(pli_matrix(epoch, trim_frac), layout);
}

}  // namespace eegdep
