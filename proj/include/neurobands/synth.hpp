#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "neurobands/bands.hpp"
#include "neurobands/recording.hpp"

namespace neurobands {

// Band-coded synthetic EEG. Trial i belongs to class i % 2; every channel
// listed in signal_channels carries a sinusoid inside the class's band, all
// channels carry white Gaussian noise.
struct SynthSpec {
  std::size_t n_trials = 8;
  std::size_t n_channels = 32;
  std::size_t n_samples = 8064;
  double sample_rate_hz = 128.0;
  std::array<BandName, 2> class_band_map = {BandName::theta, BandName::gamma};
  // Tone frequency per class; defaults to the band's midpoint.
  std::array<std::optional<double>, 2> tone_hz{};
  double tone_amplitude = 1.0;
  double noise_amplitude = 0.1;
  // Geneva indices (within the first n_channels) that carry the tone. Empty
  // means all channels.
  std::vector<std::size_t> signal_channels;
  int subject_id = 1;
  std::uint64_t seed = 0;
};

double class_tone_hz(const SynthSpec& spec, ClassLabel c);

Recording synth_dataset(const SynthSpec& spec);

}  // namespace neurobands
