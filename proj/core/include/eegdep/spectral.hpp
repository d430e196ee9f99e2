#pragma once

#include <complex>
#include <span>
#include <vector>

namespace eegdep {

// Full-length complex spectrum of a real series.
std::vector<std::complex<double>> fft_real(std::span<const double> x);

// Inverse of fft_real's convention (scaled by 1/N); returns the complex series.
std::vector<std::complex<double>> ifft(const std::vector<std::complex<double>>& spectrum);

// |X_k|^2 for k = 0..N-1 (unnormalized periodogram bins).
std::vector<double> power_spectrum(std::span<const double> x);

}  // namespace eegdep
