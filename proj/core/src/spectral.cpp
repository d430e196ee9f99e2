#include "eegdep/spectral.hpp"

#include <unsupported/Eigen/FFT>

namespace eegdep {

std::vector<std::complex<double>> fft_real(std::span<const double> x) {
  Eigen::FFT<double> fft;
  std::vector<double> in(x.begin(), x.end());
  std::vector<std::complex<double>> out;
  fft.fwd(out, in);
  return out;
}

std::vector<std::complex<double>> ifft(const std::vector<std::complex<double>>& spectrum) {
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> out;
  fft.inv(out, spectrum);
  return out;
}

std::vector<double> power_spectrum(std::span<const double> x) {
  const auto spec = fft_real(x);
  std::vector<double> p(spec.size());
  for (std::size_t k = 0; k < spec.size(); ++k) p[k] = std::norm(spec[k]);
  return p;
}

}  // namespace eegdep
