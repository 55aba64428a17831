#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "neurobands/electrode_sets.hpp"
#include "neurobands/features.hpp"
#include "neurobands/network.hpp"
#include "neurobands/recording.hpp"
#include "neurobands/train.hpp"

namespace neurobands {

enum class SplitGranularity { window, trial };

struct SplitSpec {
  double train_fraction = 0.8;
  bool stratified = true;
  SplitGranularity granularity = SplitGranularity::window;
  std::uint64_t seed = 42;

  void validate() const;  // throws SplitError
};

struct SplitResult {
  FeatureSet train;
  FeatureSet test;
  std::vector<std::size_t> train_rows;  // ascending indices into the source set
  std::vector<std::size_t> test_rows;
};

SplitResult split(const FeatureSet& features, const SplitSpec& spec);

// Rows are actual class, columns predicted class.
struct Confusion {
  std::size_t tn = 0, fp = 0, fn = 0, tp = 0;

  std::size_t total() const { return tn + fp + fn + tp; }
  double accuracy() const;
  void add(ClassLabel actual, ClassLabel predicted);
  Confusion& operator+=(const Confusion& o);
  friend bool operator==(const Confusion&, const Confusion&) = default;
};

struct EvalReport {
  std::string set_id;
  std::vector<std::string> electrodes;
  std::size_t n_electrodes = 0;
  double test_accuracy = 0.0;  // (tp + tn) / total, in [0, 1]
  TrainHistory train_history;
  std::optional<double> prior_accuracy;  // percent
  Confusion confusion;
  std::optional<double> trial_accuracy;  // majority vote over each trial's test windows
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

struct HarnessConfig {
  NetworkConfig network;  // input_dim is replaced per set
  TrainConfig train;
  SplitSpec split;
  WindowPlan window;
  LabelConfig label;
  bool per_subject = false;  // false: pool every recording's windows
  std::size_t jobs = 1;
};

struct RunResult {
  EvalReport report;
  Network network;
  SplitResult split;
};

// Split -> fit stats on train rows -> train -> evaluate on test rows.
RunResult run_features(const FeatureSet& features, const ElectrodeSet& set, const HarnessConfig& cfg);

// Feature extraction plus run_features. Recordings must already be trimmed.
EvalReport run_set(std::span<const Recording> recs, const ElectrodeSet& set, const HarnessConfig& cfg);

struct ComparisonTable {
  std::vector<EvalReport> rows;
  friend bool operator==(const ComparisonTable&, const ComparisonTable&) = default;
};

// One run_set per set, all sharing the split seed and train config. Runs up
// to cfg.jobs sets concurrently; row order follows `sets`.
ComparisonTable compare_sets(std::span<const Recording> recs, std::span<const ElectrodeSet> sets,
                             const HarnessConfig& cfg);

struct CurvePoint {
  std::size_t n_electrodes = 0;
  double accuracy = 0.0;
  std::string set_id;
  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

struct CurveData {
  std::vector<CurvePoint> points;  // ascending n_electrodes, one per count
  ComparisonTable evaluated;
};

// Literature sets evaluated by the electrode-count sweep (2, 6 and 7 are
// left out). Sizes 4, 5, 8, 8, 12, 32.
inline constexpr std::array<int, 6> kSweepSets = {4, 3, 8, 5, 1, 9};

// Keeps the better set when two share a size (first evaluated wins ties).
CurveData curve_from_reports(const ComparisonTable& evaluated);

CurveData electrode_count_sweep(std::span<const Recording> recs, const HarnessConfig& cfg);

}  // namespace neurobands
