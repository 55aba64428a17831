#include "neurobands/spectral.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "neurobands/errors.hpp"
#include "neurobands/montage.hpp"

namespace neurobands {

std::string_view band_label(BandName name) {
  switch (name) {
    case BandName::delta: return "Delta";
    case BandName::theta: return "Theta";
    case BandName::alpha: return "Alpha";
    case BandName::beta: return "Beta";
    case BandName::gamma: return "Gamma";
  }
  return "?";
}

std::optional<BandName> parse_band(std::string_view name) {
  for (const auto& b : kBands) {
    if (iequals(name, band_label(b.name))) return b.name;
  }
  return std::nullopt;
}

Spectrum dft_naive(std::span<const double> x, double rate_hz) {
  const std::size_t n = x.size();
  Spectrum spec;
  spec.rate_hz = rate_hz;
  spec.bins.assign(n, Complex{});
  // roots[m] = exp(-j 2 pi m / N); k*i is reduced mod N before lookup
  std::vector<Complex> roots(n);
  for (std::size_t m = 0; m < n; ++m) {
    const double angle = -2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(n);
    roots[m] = Complex(std::cos(angle), std::sin(angle));
  }
  for (std::size_t k = 0; k < n; ++k) {
    Complex acc{};
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * roots[(k * i) % n];
    spec.bins[k] = acc;
  }
  return spec;
}

FftPlan::FftPlan(std::size_t n) : n_(n) {
  if (!is_power_of_two(n)) throw FftSizeError("FFT size " + std::to_string(n) + " is not a power of two");
  bitrev_.resize(n);
  std::size_t bits = 0;
  while ((std::size_t{1} << bits) < n) ++bits;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = 0;
    for (std::size_t b = 0; b < bits; ++b) r |= ((i >> b) & 1u) << (bits - 1 - b);
    bitrev_[i] = r;
  }
  twiddles_.resize(n / 2);
  for (std::size_t k = 0; k < n / 2; ++k) {
    twiddles_[k] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
  }
}

void FftPlan::butterflies(std::span<Complex> a) const {
  for (std::size_t len = 2; len <= n_; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = n_ / len;
    for (std::size_t start = 0; start < n_; start += len) {
      for (std::size_t j = 0; j < half; ++j) {
        const Complex t = twiddles_[j * stride] * a[start + j + half];
        const Complex u = a[start + j];
        a[start + j] = u + t;
        a[start + j + half] = u - t;
      }
    }
  }
}

template <typename T>
void FftPlan::transform_real(std::span<const T> in, std::span<Complex> out) const {
  if (in.size() != n_ || out.size() != n_) throw FftSizeError("buffer size does not match plan");
  for (std::size_t i = 0; i < n_; ++i) out[bitrev_[i]] = Complex(static_cast<double>(in[i]), 0.0);
  butterflies(out);
}

template void FftPlan::transform_real<float>(std::span<const float>, std::span<Complex>) const;
template void FftPlan::transform_real<double>(std::span<const double>, std::span<Complex>) const;

void FftPlan::transform(std::span<const double> in, std::span<Complex> out) const { transform_real(in, out); }

Spectrum fft(std::span<const double> x, double rate_hz) {
  FftPlan plan(x.size());
  Spectrum spec;
  spec.rate_hz = rate_hz;
  spec.bins.resize(x.size());
  plan.transform(x, spec.bins);
  return spec;
}

double one_sided_power(const Spectrum& spec, double low_hz, double high_hz) {
  const std::size_t n = spec.size();
  double p = 0.0;
  for (std::size_t k = 1; k <= n / 2; ++k) {
    const double f = spec.frequency(k);
    if (f >= low_hz && f < high_hz) p += std::norm(spec.bins[k]);
  }
  return p;
}

double band_power(const Spectrum& spec, const BandDefinition& b) {
  if (!(b.low_hz > 0.0 && b.low_hz < b.high_hz)) throw BandError("band must satisfy 0 < low < high");
  if (b.high_hz > spec.rate_hz / 2) {
    throw BandError("band upper edge " + std::to_string(b.high_hz) + " Hz exceeds Nyquist");
  }
  return one_sided_power(spec, b.low_hz, b.high_hz);
}

std::array<double, 5> band_powers(const Spectrum& spec) {
  std::array<double, 5> out{};
  for (std::size_t i = 0; i < kBands.size(); ++i) out[i] = band_power(spec, kBands[i]);
  return out;
}

void WindowPlan::validate() const {
  if (!is_power_of_two(window_size)) {
    throw FftSizeError("window size " + std::to_string(window_size) + " is not a power of two");
  }
  if (step_size < 1) throw WindowError("step size must be >= 1");
}

std::size_t window_count(std::size_t n_samples, const WindowPlan& plan) {
  plan.validate();
  if (n_samples < plan.window_size) {
    throw WindowError("signal of " + std::to_string(n_samples) + " samples is shorter than the " +
                      std::to_string(plan.window_size) + "-sample window");
  }
  return (n_samples - plan.window_size) / plan.step_size + 1;
}

std::vector<std::vector<double>> extract_windows(std::span<const double> channel, const WindowPlan& plan) {
  const std::size_t count = window_count(channel.size(), plan);
  std::vector<std::vector<double>> out;
  out.reserve(count);
  for (std::size_t w = 0; w < count; ++w) {
    auto first = channel.begin() + static_cast<std::ptrdiff_t>(w * plan.step_size);
    out.emplace_back(first, first + static_cast<std::ptrdiff_t>(plan.window_size));
  }
  return out;
}

}  // namespace neurobands
