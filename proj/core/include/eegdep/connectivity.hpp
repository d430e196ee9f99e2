#pragma once

#include <Eigen/Core>
#include <complex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "eegdep/channels.hpp"
#include "eegdep/signal.hpp"

namespace eegdep {

// Analytic signal via the FFT method: negative frequencies zeroed, positive
// doubled, DC and Nyquist kept as-is.
std::vector<std::complex<double>> analytic_signal(std::span<const double> x);

// Instantaneous phase arg(analytic(x)), in (-pi, pi].
std::vector<double> instantaneous_phase(std::span<const double> x);

// Phase lag index of two phase series: |mean sign(wrap(a - b))| with
// sign(0) = 0 and wrap into (-pi, pi]. Range [0, 1].
double pli_pair(std::span<const double> phase_a, std::span<const double> phase_b);

// Symmetric channels x channels PLI matrix with zero diagonal. trim_frac of
// the samples are dropped from each end of the phase series before pairing,
// to keep Hilbert edge effects out of the statistic.
Eigen::MatrixXd pli_matrix(const Epoch& epoch, double trim_frac = 0.05);

enum class EdgeKind { IntraLeft, IntraRight, Inter };

EdgeKind edge_kind(const ChannelLayout& layout, std::size_t i, std::size_t j);
const char* edge_kind_name(EdgeKind kind);

// "pli:<A>-<B>" with A the lower canonical index.
std::string edge_name(const ChannelLayout& layout, std::size_t i, std::size_t j);

// Inverse of edge_name; throws UnknownFeature on malformed names and
// UnknownChannel on labels outside the layout. Returns (i, j) with i < j.
std::pair<std::size_t, std::size_t> parse_edge_name(const ChannelLayout& layout,
                                                    const std::string& name);

struct ConnectivityBlock {
  std::vector<std::string> names;  // upper triangle, row-major
  std::vector<double> values;
};

// Upper-triangle row-major vectorization of a square connectivity matrix.
ConnectivityBlock vectorize_upper(const Eigen::MatrixXd& m, const ChannelLayout& layout);

ConnectivityBlock extract_connectivity(const Epoch& epoch, const ChannelLayout& layout,
                                       double trim_frac = 0.05);

}  // namespace eegdep
