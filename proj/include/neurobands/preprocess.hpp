#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "neurobands/recording.hpp"

namespace neurobands {

// One trial as data[channel][sample].
using TrialData = std::vector<std::vector<double>>;

struct FilterSpec {
  double low_cut_hz = 4.0;
  double high_cut_hz = 45.0;
  int order = 4;
};

// Zero-phase Butterworth bandpass, forward-backward with 3*order samples of
// reflection padding at each edge.
std::vector<double> bandpass(std::span<const double> signal, double rate_hz, const FilterSpec& spec = {});

// Anti-alias lowpass at 0.9 x target Nyquist, then keep every ratio-th sample.
std::vector<double> downsample(std::span<const double> signal, double from_hz, double to_hz);

// Common average reference: subtract the across-channel mean at every sample.
TrialData average_reference(const TrialData& trial);

// Drops the first round(baseline_s * rate_hz) samples of every channel.
TrialData trim_baseline(const TrialData& trial, double rate_hz, double baseline_s = 3.0);

enum class InputMode {
  raw,           // downsample (if needed), bandpass, average reference, trim
  preprocessed,  // already 128 Hz, filtered and referenced: trim only
};

struct ChainConfig {
  InputMode mode = InputMode::preprocessed;
  double target_rate_hz = 128.0;
  FilterSpec filter;
  double baseline_s = 3.0;
};

Recording preprocess_recording(const Recording& rec, const ChainConfig& cfg = {});

}  // namespace neurobands
