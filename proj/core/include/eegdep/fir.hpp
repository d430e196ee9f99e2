#pragma once

#include <span>
#include <vector>

namespace eegdep {

// Hamming-windowed sinc band-pass kernel, built as the difference of two
// unit-DC-gain lowpass kernels so the DC response is exactly zero.
// taps must be odd and >= 3.
std::vector<double> design_bandpass_kernel(double fs, double lo, double hi, int taps);

// Linear-phase FIR applied forward and backward (zero net phase). Edges are
// zero-padded; output length equals input length.
std::vector<double> filtfilt(const std::vector<double>& kernel, std::span<const double> x);

// Zero-phase 1-40 Hz style band-pass. Default 251 taps.
std::vector<double> bandpass_fir(std::span<const double> x, double fs, double lo, double hi,
                                 int taps = 251);

}  // namespace eegdep
