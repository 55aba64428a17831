#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "neurobands/recording.hpp"

namespace neurobands {

// Dense row-major matrix of doubles.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), values(r * c, fill) {}

  std::span<double> row(std::size_t i) { return {values.data() + i * cols, cols}; }
  std::span<const double> row(std::size_t i) const { return {values.data() + i * cols, cols}; }
  double& operator()(std::size_t i, std::size_t j) { return values[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
};

struct NetworkConfig {
  std::size_t input_dim = 160;  // electrodes x 5 bands
  std::size_t conv_channels = 32;
  std::size_t kernel_size = 3;
  std::size_t n_residual_blocks = 1;
  std::size_t dense_hidden = 128;
  double dropout_rate = 0.25;
  std::size_t n_classes = 2;
  std::uint64_t seed = 0;

  void validate() const;  // throws ConfigError
  friend bool operator==(const NetworkConfig&, const NetworkConfig&) = default;
};

// Per-column z-score statistics, fitted on training rows only.
struct ColumnStats {
  std::vector<double> mean;
  std::vector<double> stddev;
  friend bool operator==(const ColumnStats&, const ColumnStats&) = default;
};

// Named slice of the flat parameter vector, in declared layer order.
struct ParamBlock {
  std::string name;
  std::size_t offset = 0;
  std::size_t size = 0;
};

// Residual 1D-CNN over the feature vector treated as a 1-channel sequence:
//
//   x[D] -> Conv1d(1->C, k, same) -> ReLU
//        -> n x { Conv1d(C->C) -> ReLU -> Conv1d(C->C) ; + skip ; ReLU }
//        -> global average pool over length -> Dense(C->H) -> ReLU
//        -> Dropout -> Dense(H->2) -> softmax
class Network {
 public:
  explicit Network(const NetworkConfig& cfg);

  const NetworkConfig& config() const { return cfg_; }

  std::span<double> parameters() { return params_; }
  std::span<const double> parameters() const { return params_; }
  std::size_t parameter_count() const { return params_.size(); }
  static std::size_t parameter_count(const NetworkConfig& cfg);
  const std::vector<ParamBlock>& parameter_blocks() const { return blocks_; }
  std::span<double> block(const std::string& name);

  void set_column_stats(ColumnStats stats);
  void clear_column_stats() { stats_.reset(); }
  const std::optional<ColumnStats>& column_stats() const { return stats_; }

  void seed_dropout(std::uint64_t seed) { dropout_rng_.seed(seed); }

  // Softmax probabilities [B][n_classes]. Caches activations for backward.
  Matrix forward(const Matrix& batch, bool train_mode);

  // Mean cross-entropy of the cached forward pass.
  double loss(std::span<const ClassLabel> labels) const;

  // Gradient of the mean cross-entropy w.r.t. every parameter (same layout
  // as parameters()). Requires a preceding forward on the same batch.
  std::vector<double> backward(std::span<const ClassLabel> labels);

  // Residual block output (after the final ReLU) of one cached sample,
  // laid out [channel][position].
  std::span<const double> block_output(std::size_t sample, std::size_t block_index) const;
  std::span<const double> block_input(std::size_t sample, std::size_t block_index) const;

 private:
  struct Conv {
    std::size_t in_ch, out_ch, k, w, b;
  };
  struct Dense {
    std::size_t in, out, w, b;
  };
  struct Cache {
    std::size_t batch = 0;
    std::vector<double> input;                // [B][L]
    std::vector<std::vector<double>> stage;   // stage[0] = stem output, stage[i+1] = block i output; [B][C][L]
    std::vector<std::vector<double>> inner;   // block i first conv post-ReLU; [B][C][L]
    std::vector<double> pooled;               // [B][C]
    std::vector<double> hidden;               // post-ReLU [B][H]
    std::vector<double> mask;                 // dropout multipliers [B][H]
    Matrix probs;
  };

  void add_block(const std::string& name, std::size_t size);
  Conv make_conv(const std::string& name, std::size_t in_ch, std::size_t out_ch);
  Dense make_dense(const std::string& name, std::size_t in, std::size_t out);

  NetworkConfig cfg_;
  std::vector<double> params_;
  std::vector<ParamBlock> blocks_;
  Conv stem_{};
  std::vector<std::pair<Conv, Conv>> residual_;
  Dense hidden_{};
  Dense output_{};
  std::optional<ColumnStats> stats_;
  std::mt19937_64 dropout_rng_;
  std::optional<Cache> cache_;
};

Network build_network(const NetworkConfig& cfg);

// Argmax with ties resolved toward class 0.
ClassLabel argmax_class(std::span<const double> probs);

std::vector<ClassLabel> predict(Network& net, const Matrix& batch);

}  // namespace neurobands
