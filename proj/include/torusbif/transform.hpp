#pragma once

// Uniform-grid transforms between cosine/complex Fourier coefficients and samples.
// Each thread owns its FFT plan cache.

#include <complex>
#include <cstddef>
#include <vector>

#include <unsupported/Eigen/FFT>

namespace torusbif {

using cplx = std::complex<double>;

namespace detail {

inline Eigen::FFT<double>& thread_fft() {
  thread_local Eigen::FFT<double> fft;
  return fft;
}

}  // namespace detail

/// Smallest m >= n of the form 2^a 3^b 5^c.
inline std::size_t next_fast_size(std::size_t n) {
  if (n <= 1) return 1;
  for (std::size_t m = n;; ++m) {
    std::size_t r = m;
    for (std::size_t f : {2u, 3u, 5u})
      while (r % f == 0) r /= f;
    if (r == 1) return m;
  }
}

/// values_j = sum_n spectrum_n exp(2 pi i j n / M), unnormalized synthesis.
inline std::vector<cplx> synthesize(const std::vector<cplx>& spectrum) {
  std::vector<cplx> out;
  auto& fft = detail::thread_fft();
  fft.SetFlag(Eigen::FFT<double>::Unscaled);
  fft.inv(out, spectrum);
  return out;
}

/// spectrum_n = (1/M) sum_j values_j exp(-2 pi i j n / M).
inline std::vector<cplx> analyze(const std::vector<cplx>& values) {
  std::vector<cplx> out;
  auto& fft = detail::thread_fft();
  fft.fwd(out, values);
  const double scale = 1.0 / static_cast<double>(values.size());
  for (auto& c : out) c *= scale;
  return out;
}

}  // namespace torusbif
