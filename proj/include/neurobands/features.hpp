#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "neurobands/electrode_sets.hpp"
#include "neurobands/recording.hpp"
#include "neurobands/spectral.hpp"

namespace neurobands {

inline constexpr double kLogEpsilon = 1e-8;

struct RowOrigin {
  std::int32_t subject = 0;
  std::int32_t trial = 0;
  std::int32_t window_start = 0;
  friend bool operator==(const RowOrigin&, const RowOrigin&) = default;
};

// Windowed log band-power matrix. Columns are electrode-major, then band
// (Delta..Gamma), in the electrode set's declared order.
struct FeatureSet {
  std::string electrode_set_id;
  std::vector<std::string> columns;
  std::size_t n_rows = 0;
  std::vector<float> matrix;  // n_rows * n_cols, row-major
  std::vector<ClassLabel> labels;
  std::vector<RowOrigin> provenance;

  std::size_t n_cols() const { return columns.size(); }
  std::span<const float> row(std::size_t i) const { return {matrix.data() + i * n_cols(), n_cols()}; }

  FeatureSet select_rows(std::span<const std::size_t> rows) const;
  void append(const FeatureSet& other);
  void validate() const;
};

std::vector<std::string> feature_columns(const ElectrodeSet& set);

// Expects recordings already trimmed to the post-baseline segment.
FeatureSet extract_features(const Recording& rec, const ElectrodeSet& set, const WindowPlan& plan = {},
                            const LabelConfig& label_cfg = {}, std::size_t jobs = 1);

// Rows of all recordings concatenated in input order.
FeatureSet extract_features(std::span<const Recording> recs, const ElectrodeSet& set, const WindowPlan& plan = {},
                            const LabelConfig& label_cfg = {}, std::size_t jobs = 1);

// EEGB container, kind "features". Payload: f32 matrix, then one u8 label
// per row, then (subject, trial, window_start) as i32 triples.
void write_features(const std::filesystem::path& path, const FeatureSet& fs);
FeatureSet load_features(const std::filesystem::path& path);

}  // namespace neurobands
