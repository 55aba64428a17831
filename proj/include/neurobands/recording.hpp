#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace neurobands {

// Rating columns in the order DEAP stores them.
enum class LabelColumn : std::size_t { valence = 0, arousal = 1, dominance = 2, liking = 3 };

using LabelRow = std::array<double, 4>;

// Binary class: 0 = low, 1 = high.
enum class ClassLabel : std::uint8_t { low = 0, high = 1 };

inline constexpr double kDefaultThreshold = 5.0;

struct LabelConfig {
  LabelColumn column = LabelColumn::valence;
  double threshold = kDefaultThreshold;
};

// Per-subject EEG tensor [trial][channel][sample], stored as 32-bit floats
// (the on-disk precision).
struct Recording {
  int subject_id = 1;
  double sample_rate_hz = 128.0;
  std::size_t n_trials = 0;
  std::size_t n_channels = 0;
  std::size_t n_samples = 0;
  std::vector<std::string> channel_names;
  std::vector<LabelRow> labels;  // one row per trial
  std::vector<float> data;       // n_trials * n_channels * n_samples

  std::span<const float> channel(std::size_t trial, std::size_t ch) const {
    return {data.data() + offset(trial, ch), n_samples};
  }
  std::span<float> channel(std::size_t trial, std::size_t ch) {
    return {data.data() + offset(trial, ch), n_samples};
  }

  // Throws SpecError / MontageError when sizes or names are inconsistent.
  void validate() const;

 private:
  std::size_t offset(std::size_t trial, std::size_t ch) const {
    return (trial * n_channels + ch) * n_samples;
  }
};

// class = high iff rating >= threshold. Ratings must lie in [1, 9].
ClassLabel binarize_rating(double rating, double threshold = kDefaultThreshold);

std::vector<ClassLabel> binarize_valence(std::span<const LabelRow> labels,
                                         double threshold = kDefaultThreshold);

std::vector<ClassLabel> binarize(std::span<const LabelRow> labels, const LabelConfig& cfg);

// Channel names must be Geneva names, unique, and in Geneva order (a full
// montage or an order-preserving subset of it).
void check_channel_names(std::span<const std::string> names);

}  // namespace neurobands
