#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "neurobands/bands.hpp"

namespace neurobands {

using Complex = std::complex<double>;

// Full two-sided DFT of a real signal. Bin k sits at k * rate_hz / N.
struct Spectrum {
  std::vector<Complex> bins;
  double rate_hz = 1.0;

  std::size_t size() const { return bins.size(); }
  double frequency(std::size_t k) const { return static_cast<double>(k) * rate_hz / static_cast<double>(bins.size()); }
};

// Direct O(N^2) evaluation of X[k] = sum_n x[n] exp(-j 2 pi k n / N).
Spectrum dft_naive(std::span<const double> x, double rate_hz = 1.0);

constexpr bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Iterative radix-2 decimation-in-time FFT with precomputed twiddles and
// bit-reversal permutation. A plan is immutable and can be shared.
class FftPlan {
 public:
  explicit FftPlan(std::size_t n);

  std::size_t size() const { return n_; }
  void transform(std::span<const double> in, std::span<Complex> out) const;
  template <typename T>
  void transform_real(std::span<const T> in, std::span<Complex> out) const;

 private:
  void butterflies(std::span<Complex> data) const;

  std::size_t n_;
  std::vector<std::size_t> bitrev_;
  std::vector<Complex> twiddles_;  // exp(-j 2 pi k / N), k < N/2
};

Spectrum fft(std::span<const double> x, double rate_hz = 1.0);

// Sum of |X[k]|^2 over one-sided bins k in [1, N/2] whose frequency lies in
// [low_hz, high_hz).
double one_sided_power(const Spectrum& spec, double low_hz, double high_hz);

double band_power(const Spectrum& spec, const BandDefinition& band);

std::array<double, 5> band_powers(const Spectrum& spec);

struct WindowPlan {
  std::size_t window_size = 256;
  std::size_t step_size = 16;

  void validate() const;  // throws FftSizeError / WindowError
};

std::size_t window_count(std::size_t n_samples, const WindowPlan& plan);

// Rectangular windows starting at 0, step, 2*step, ...
std::vector<std::vector<double>> extract_windows(std::span<const double> channel, const WindowPlan& plan);

}  // namespace neurobands
