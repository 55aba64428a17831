#include "neurobands/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "neurobands/errors.hpp"
#include "neurobands/montage.hpp"

namespace neurobands {

namespace {

double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

double class_tone_hz(const SynthSpec& spec, ClassLabel c) {
  const auto i = static_cast<std::size_t>(c);
  const BandDefinition& b = band(spec.class_band_map[i]);
  return spec.tone_hz[i].value_or(0.5 * (b.low_hz + b.high_hz));
}

Recording synth_dataset(const SynthSpec& spec) {
  if (spec.n_trials == 0) throw SpecError("n_trials must be > 0");
  if (spec.n_channels == 0) throw SpecError("n_channels must be > 0");
  if (spec.n_channels > kMontageSize) throw SpecError("n_channels exceeds the 32-electrode montage");
  if (spec.n_samples == 0) throw SpecError("n_samples must be > 0");
  if (!(spec.sample_rate_hz > 0.0)) throw SpecError("sample rate must be positive");
  if (spec.noise_amplitude < 0.0) throw SpecError("noise amplitude must be >= 0");
  for (std::size_t c = 0; c < 2; ++c) {
    const double f = class_tone_hz(spec, static_cast<ClassLabel>(c));
    if (!band(spec.class_band_map[c]).contains(f)) throw SpecError("tone frequency outside its class band");
    if (f >= spec.sample_rate_hz / 2) throw SpecError("tone frequency above Nyquist");
  }
  for (auto ch : spec.signal_channels) {
    if (ch >= spec.n_channels) throw SpecError("signal channel index out of range");
  }

  Recording rec;
  rec.subject_id = spec.subject_id;
  rec.sample_rate_hz = spec.sample_rate_hz;
  rec.n_trials = spec.n_trials;
  rec.n_channels = spec.n_channels;
  rec.n_samples = spec.n_samples;
  for (std::size_t i = 0; i < spec.n_channels; ++i) rec.channel_names.emplace_back(geneva_order()[i]);
  rec.data.resize(spec.n_trials * spec.n_channels * spec.n_samples);

  std::vector<bool> carries(spec.n_channels, spec.signal_channels.empty());
  for (auto ch : spec.signal_channels) carries[ch] = true;

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (std::size_t t = 0; t < spec.n_trials; ++t) {
    const auto cls = static_cast<ClassLabel>(t % 2);
    const double f = class_tone_hz(spec, cls);
    // High class: valence in [5, 9]; low class: [1, 5).
    const double valence = cls == ClassLabel::high ? 5.0 + 4.0 * unit_uniform(rng)
                                                   : 1.0 + 3.999 * unit_uniform(rng);
    rec.labels.push_back({valence, 1.0 + 8.0 * unit_uniform(rng), 1.0 + 8.0 * unit_uniform(rng),
                          1.0 + 8.0 * unit_uniform(rng)});
    for (std::size_t ch = 0; ch < spec.n_channels; ++ch) {
      const double phase = 2.0 * std::numbers::pi * unit_uniform(rng);
      auto out = rec.channel(t, ch);
      for (std::size_t n = 0; n < spec.n_samples; ++n) {
        double v = 0.0;
        if (carries[ch]) {
          v = spec.tone_amplitude *
              std::sin(2.0 * std::numbers::pi * f * static_cast<double>(n) / spec.sample_rate_hz + phase);
        }
        v += spec.noise_amplitude * noise(rng);
        out[n] = static_cast<float>(v);
      }
    }
  }
  return rec;
}

}  // namespace neurobands
