#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace neurobands::iir {

// One second-order section, a0 normalized to 1.
struct Biquad {
  double b0 = 1.0, b1 = 0.0, b2 = 0.0;
  double a1 = 0.0, a2 = 0.0;
};

using Sos = std::vector<Biquad>;

// Digital Butterworth designs via the bilinear transform with prewarping.
// `order` is the analog prototype order; a bandpass has 2*order poles.
Sos butter_lowpass(int order, double cutoff_hz, double rate_hz);
Sos butter_bandpass(int order, double low_hz, double high_hz, double rate_hz);

double magnitude_at(const Sos& sos, double freq_hz, double rate_hz);

// Causal cascade filtering. Each section starts from the steady state it
// would reach for a constant input equal to x[0].
std::vector<double> sosfilt(const Sos& sos, std::span<const double> x);

// Forward-backward filtering with odd reflection padding of `padlen`
// samples at each edge. Requires padlen < x.size().
std::vector<double> sosfiltfilt(const Sos& sos, std::span<const double> x, std::size_t padlen);

}  // namespace neurobands::iir
