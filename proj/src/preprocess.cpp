#include "neurobands/preprocess.hpp"

#include <cmath>
#include <numeric>

#include "neurobands/errors.hpp"
#include "neurobands/iir.hpp"

namespace neurobands {

namespace {

constexpr int kAntiAliasOrder = 8;

void check_rectangular(const TrialData& trial) {
  for (const auto& ch : trial) {
    if (ch.size() != trial.front().size()) throw SpecError("channels differ in length");
  }
}

}  // namespace

std::vector<double> bandpass(std::span<const double> signal, double rate_hz, const FilterSpec& spec) {
  if (!(spec.low_cut_hz > 0.0 && spec.low_cut_hz < spec.high_cut_hz)) {
    throw FilterError("need 0 < low_cut < high_cut");
  }
  if (spec.high_cut_hz >= rate_hz / 2) throw FilterError("high_cut must be below Nyquist");
  if (spec.order < 1) throw FilterError("order must be >= 1");
  const auto padlen = static_cast<std::size_t>(3 * spec.order);
  if (signal.size() <= padlen) throw FilterError("signal must be longer than 3 x order samples");
  const auto sos = iir::butter_bandpass(spec.order, spec.low_cut_hz, spec.high_cut_hz, rate_hz);
  return iir::sosfiltfilt(sos, signal, padlen);
}

std::vector<double> downsample(std::span<const double> signal, double from_hz, double to_hz) {
  if (!(from_hz > 0.0 && to_hz > 0.0)) throw ResampleError("rates must be positive");
  const double ratio_f = from_hz / to_hz;
  const auto ratio = static_cast<std::size_t>(std::llround(ratio_f));
  if (ratio < 1 || std::abs(ratio_f - static_cast<double>(ratio)) > 1e-9) {
    throw ResampleError("from_hz must be an integer multiple of to_hz");
  }
  if (ratio == 1) return {signal.begin(), signal.end()};

  const auto padlen = static_cast<std::size_t>(3 * kAntiAliasOrder);
  if (signal.size() <= padlen) throw ResampleError("signal too short to anti-alias");
  const auto sos = iir::butter_lowpass(kAntiAliasOrder, 0.9 * (to_hz / 2.0), from_hz);
  const auto filtered = iir::sosfiltfilt(sos, signal, padlen);
  std::vector<double> out;
  out.reserve(signal.size() / ratio);
  for (std::size_t i = 0; i + ratio <= signal.size(); i += ratio) out.push_back(filtered[i]);
  return out;
}

TrialData average_reference(const TrialData& trial) {
  if (trial.size() < 2) throw SpecError("average reference needs at least 2 channels");
  check_rectangular(trial);
  const std::size_t n = trial.front().size();
  const double inv = 1.0 / static_cast<double>(trial.size());
  TrialData out = trial;
  for (std::size_t t = 0; t < n; ++t) {
    double mean = 0.0;
    for (const auto& ch : trial) mean += ch[t];
    mean *= inv;
    for (auto& ch : out) ch[t] -= mean;
  }
  return out;
}

TrialData trim_baseline(const TrialData& trial, double rate_hz, double baseline_s) {
  if (baseline_s < 0.0) throw TrimError("baseline must be >= 0");
  if (baseline_s == 0.0) return trial;
  check_rectangular(trial);
  const auto drop = static_cast<std::size_t>(std::llround(baseline_s * rate_hz));
  TrialData out;
  out.reserve(trial.size());
  for (const auto& ch : trial) {
    if (ch.size() <= drop) {
      throw TrimError("trial of " + std::to_string(ch.size()) + " samples has nothing left after a " +
                      std::to_string(drop) + "-sample baseline");
    }
    out.emplace_back(ch.begin() + static_cast<std::ptrdiff_t>(drop), ch.end());
  }
  return out;
}

Recording preprocess_recording(const Recording& rec, const ChainConfig& cfg) {
  rec.validate();
  Recording out;
  out.subject_id = rec.subject_id;
  out.channel_names = rec.channel_names;
  out.labels = rec.labels;
  out.n_trials = rec.n_trials;
  out.n_channels = rec.n_channels;

  const bool raw = cfg.mode == InputMode::raw;
  const double rate = raw ? cfg.target_rate_hz : rec.sample_rate_hz;
  out.sample_rate_hz = rate;

  for (std::size_t t = 0; t < rec.n_trials; ++t) {
    TrialData trial(rec.n_channels);
    for (std::size_t c = 0; c < rec.n_channels; ++c) {
      auto src = rec.channel(t, c);
      std::vector<double> x(src.begin(), src.end());
      if (raw) {
        if (rec.sample_rate_hz != cfg.target_rate_hz) x = downsample(x, rec.sample_rate_hz, cfg.target_rate_hz);
        x = bandpass(x, rate, cfg.filter);
      }
      trial[c] = std::move(x);
    }
    if (raw && rec.n_channels >= 2) trial = average_reference(trial);
    trial = trim_baseline(trial, rate, cfg.baseline_s);

    if (t == 0) {
      out.n_samples = trial.front().size();
      out.data.resize(out.n_trials * out.n_channels * out.n_samples);
    }
    for (std::size_t c = 0; c < rec.n_channels; ++c) {
      auto dst = out.channel(t, c);
      for (std::size_t i = 0; i < out.n_samples; ++i) dst[i] = static_cast<float>(trial[c][i]);
    }
  }
  return out;
}

}  // namespace neurobands
