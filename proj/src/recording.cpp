#include "neurobands/recording.hpp"

#include <cmath>
#include <string>

#include "neurobands/errors.hpp"
#include "neurobands/montage.hpp"

namespace neurobands {

void check_channel_names(std::span<const std::string> names) {
  std::size_t next = 0;
  for (const auto& name : names) {
    auto e = find_electrode(name);
    if (!e) throw MontageError(name, "not a Geneva-order electrode");
    if (e->index < next) throw MontageError(name, "duplicate or out of Geneva order");
    next = e->index + 1;
  }
}

void Recording::validate() const {
  if (n_trials == 0 || n_channels == 0 || n_samples == 0) throw SpecError("empty recording shape");
  if (!(sample_rate_hz > 0.0)) throw SpecError("sample rate must be positive");
  if (channel_names.size() != n_channels) throw SpecError("channel_names size != n_channels");
  if (labels.size() != n_trials) throw SpecError("labels rows != n_trials");
  if (data.size() != n_trials * n_channels * n_samples) throw SpecError("data size != declared shape");
  check_channel_names(channel_names);
}

ClassLabel binarize_rating(double rating, double threshold) {
  if (!(rating >= 1.0 && rating <= 9.0)) {
    throw LabelRangeError("rating " + std::to_string(rating) + " outside [1, 9]");
  }
  if (!(threshold > 1.0 && threshold < 9.0)) {
    throw LabelRangeError("threshold " + std::to_string(threshold) + " outside (1, 9)");
  }
  return rating >= threshold ? ClassLabel::high : ClassLabel::low;
}

std::vector<ClassLabel> binarize(std::span<const LabelRow> labels, const LabelConfig& cfg) {
  std::vector<ClassLabel> out;
  out.reserve(labels.size());
  const auto col = static_cast<std::size_t>(cfg.column);
  for (const auto& row : labels) out.push_back(binarize_rating(row[col], cfg.threshold));
  return out;
}

std::vector<ClassLabel> binarize_valence(std::span<const LabelRow> labels, double threshold) {
  return binarize(labels, LabelConfig{LabelColumn::valence, threshold});
}

}  // namespace neurobands
