#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "neurobands/features.hpp"
#include "neurobands/network.hpp"

namespace neurobands {

enum class OptimizerKind { adam, sgd };

struct TrainConfig {
  std::size_t epochs = 50;
  std::size_t batch_size = 64;
  double learning_rate = 1e-3;
  OptimizerKind optimizer = OptimizerKind::adam;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  bool shuffle = true;
  // Fit per-column z-score stats on the training rows and store them in the
  // network before the first epoch.
  bool standardize = true;
  std::uint64_t seed = 42;

  void validate() const;  // throws ConfigError
};

struct EpochStats {
  double loss = 0.0;      // mean cross-entropy over the training rows, eval mode
  double accuracy = 0.0;  // fraction of training rows classified correctly, eval mode
  friend bool operator==(const EpochStats&, const EpochStats&) = default;
};

struct TrainHistory {
  std::vector<EpochStats> epochs;
  friend bool operator==(const TrainHistory&, const TrainHistory&) = default;
};

class AdamOptimizer {
 public:
  AdamOptimizer(std::size_t n_params, const TrainConfig& cfg);
  void step(std::span<double> params, std::span<const double> grad);

 private:
  double lr_, beta1_, beta2_, eps_;
  std::vector<double> m_, v_;
  std::uint64_t t_ = 0;
};

ColumnStats compute_column_stats(const FeatureSet& fs);

Matrix to_matrix(const FeatureSet& fs);
Matrix to_matrix(const FeatureSet& fs, std::span<const std::size_t> rows);

// Eval-mode loss and accuracy over `fs`, in chunks of batch_size rows.
EpochStats evaluate(Network& net, const FeatureSet& fs, std::size_t batch_size = 256);

std::vector<ClassLabel> predict(Network& net, const FeatureSet& fs, std::size_t batch_size = 256);

TrainHistory train(Network& net, const FeatureSet& features, const TrainConfig& cfg);

}  // namespace neurobands
