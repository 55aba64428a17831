#include "neurobands/iir.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "neurobands/errors.hpp"

namespace neurobands::iir {

namespace {

using cplx = std::complex<double>;

std::vector<cplx> prototype_poles(int order) {
  std::vector<cplx> poles;
  for (int m = -order + 1; m < order; m += 2) {
    poles.push_back(-std::exp(cplx(0.0, std::numbers::pi * m / (2.0 * order))));
  }
  return poles;
}

double prewarp(double f_hz, double rate_hz) { return 2.0 * rate_hz * std::tan(std::numbers::pi * f_hz / rate_hz); }

cplx bilinear(cplx s, double rate_hz) {
  const double k = 2.0 * rate_hz;
  return (k + s) / (k - s);
}

// Groups digital poles into second-order denominators: conjugate pairs
// first, then leftover real poles two at a time (a single one gets a
// first-order section).
struct Denominator {
  double a1, a2;
  bool first_order;
};

std::vector<Denominator> pair_poles(const std::vector<cplx>& poles) {
  constexpr double eps = 1e-12;
  std::vector<Denominator> out;
  std::vector<double> reals;
  for (const auto& p : poles) {
    if (p.imag() > eps) {
      out.push_back({-2.0 * p.real(), std::norm(p), false});
    } else if (std::abs(p.imag()) <= eps) {
      reals.push_back(p.real());
    }
  }
  std::sort(reals.begin(), reals.end());
  for (std::size_t i = 0; i + 1 < reals.size(); i += 2) {
    out.push_back({-(reals[i] + reals[i + 1]), reals[i] * reals[i + 1], false});
  }
  if (reals.size() % 2 == 1) out.push_back({-reals.back(), 0.0, true});
  return out;
}

cplx response(const Sos& sos, double freq_hz, double rate_hz) {
  const cplx zinv = std::exp(cplx(0.0, -2.0 * std::numbers::pi * freq_hz / rate_hz));
  cplx h = 1.0;
  for (const auto& s : sos) {
    h *= (s.b0 + zinv * (s.b1 + zinv * s.b2)) / (1.0 + zinv * (s.a1 + zinv * s.a2));
  }
  return h;
}

void normalize_gain(Sos& sos, double freq_hz, double rate_hz) {
  const double g = std::abs(response(sos, freq_hz, rate_hz));
  if (!(g > 0.0) || !std::isfinite(g)) throw FilterError("degenerate filter design");
  sos.front().b0 /= g;
  sos.front().b1 /= g;
  sos.front().b2 /= g;
}

void check_order(int order) {
  if (order < 1) throw FilterError("filter order must be >= 1");
}

}  // namespace

Sos butter_lowpass(int order, double cutoff_hz, double rate_hz) {
  check_order(order);
  if (!(cutoff_hz > 0.0 && cutoff_hz < rate_hz / 2)) throw FilterError("lowpass cutoff must lie in (0, Nyquist)");
  const double wc = prewarp(cutoff_hz, rate_hz);
  std::vector<cplx> poles;
  for (const auto& p : prototype_poles(order)) poles.push_back(bilinear(p * wc, rate_hz));

  Sos sos;
  for (const auto& d : pair_poles(poles)) {
    // zeros at z = -1
    if (d.first_order) {
      sos.push_back({1.0, 1.0, 0.0, d.a1, 0.0});
    } else {
      sos.push_back({1.0, 2.0, 1.0, d.a1, d.a2});
    }
  }
  normalize_gain(sos, 0.0, rate_hz);
  return sos;
}

Sos butter_bandpass(int order, double low_hz, double high_hz, double rate_hz) {
  check_order(order);
  if (!(low_hz > 0.0 && low_hz < high_hz)) throw FilterError("bandpass needs 0 < low < high");
  if (!(high_hz < rate_hz / 2)) throw FilterError("high cutoff must be below Nyquist");
  const double w1 = prewarp(low_hz, rate_hz);
  const double w2 = prewarp(high_hz, rate_hz);
  const double bw = w2 - w1;
  const double w0 = std::sqrt(w1 * w2);

  std::vector<cplx> poles;
  for (const auto& p : prototype_poles(order)) {
    const cplx half = p * bw / 2.0;
    const cplx disc = std::sqrt(half * half - w0 * w0);
    poles.push_back(bilinear(half + disc, rate_hz));
    poles.push_back(bilinear(half - disc, rate_hz));
  }

  Sos sos;
  // one zero at z = 1 and one at z = -1 per section
  for (const auto& d : pair_poles(poles)) sos.push_back({1.0, 0.0, -1.0, d.a1, d.a2});
  const double center_hz = rate_hz / std::numbers::pi * std::atan(w0 / (2.0 * rate_hz));
  normalize_gain(sos, center_hz, rate_hz);
  return sos;
}

double magnitude_at(const Sos& sos, double freq_hz, double rate_hz) { return std::abs(response(sos, freq_hz, rate_hz)); }

std::vector<double> sosfilt(const Sos& sos, std::span<const double> x) {
  std::vector<double> y(x.begin(), x.end());
  if (y.empty()) return y;
  double steady_in = y.front();
  for (const auto& s : sos) {
    const double dc_gain = (s.b0 + s.b1 + s.b2) / (1.0 + s.a1 + s.a2);
    const double steady_out = steady_in * dc_gain;
    double z2 = s.b2 * steady_in - s.a2 * steady_out;
    double z1 = s.b1 * steady_in - s.a1 * steady_out + z2;
    for (auto& v : y) {
      const double in = v;
      const double out = s.b0 * in + z1;
      z1 = s.b1 * in - s.a1 * out + z2;
      z2 = s.b2 * in - s.a2 * out;
      v = out;
    }
    steady_in = steady_out;
  }
  return y;
}

std::vector<double> sosfiltfilt(const Sos& sos, std::span<const double> x, std::size_t padlen) {
  const std::size_t n = x.size();
  if (padlen >= n) throw FilterError("signal too short for the edge padding");
  std::vector<double> ext;
  ext.reserve(n + 2 * padlen);
  for (std::size_t i = padlen; i >= 1; --i) ext.push_back(2.0 * x[0] - x[i]);
  ext.insert(ext.end(), x.begin(), x.end());
  for (std::size_t i = 1; i <= padlen; ++i) ext.push_back(2.0 * x[n - 1] - x[n - 1 - i]);

  auto fwd = sosfilt(sos, ext);
  std::reverse(fwd.begin(), fwd.end());
  auto bwd = sosfilt(sos, fwd);
  std::reverse(bwd.begin(), bwd.end());
  return {bwd.begin() + static_cast<std::ptrdiff_t>(padlen), bwd.begin() + static_cast<std::ptrdiff_t>(padlen + n)};
}

}  // namespace neurobands::iir
