#include "neurobands/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "neurobands/errors.hpp"

namespace neurobands {

void TrainConfig::validate() const {
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (!(learning_rate >= 0.0)) throw ConfigError("learning rate must be >= 0");
}

AdamOptimizer::AdamOptimizer(std::size_t n_params, const TrainConfig& cfg)
    : lr_(cfg.learning_rate), beta1_(cfg.beta1), beta2_(cfg.beta2), eps_(cfg.epsilon), m_(n_params, 0.0),
      v_(n_params, 0.0) {}

void AdamOptimizer::step(std::span<double> params, std::span<const double> grad) {
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * grad[i];
    v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * grad[i] * grad[i];
    params[i] -= lr_ * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + eps_);
  }
}

ColumnStats compute_column_stats(const FeatureSet& fs) {
  const std::size_t n = fs.n_rows, d = fs.n_cols();
  if (n == 0) throw DataError("cannot compute stats of an empty feature set");
  ColumnStats st{std::vector<double>(d, 0.0), std::vector<double>(d, 0.0)};
  for (std::size_t r = 0; r < n; ++r) {
    auto row = fs.row(r);
    for (std::size_t j = 0; j < d; ++j) st.mean[j] += row[j];
  }
  for (auto& m : st.mean) m /= static_cast<double>(n);
  for (std::size_t r = 0; r < n; ++r) {
    auto row = fs.row(r);
    for (std::size_t j = 0; j < d; ++j) {
      const double dv = row[j] - st.mean[j];
      st.stddev[j] += dv * dv;
    }
  }
  for (auto& s : st.stddev) s = std::sqrt(s / static_cast<double>(n));
  return st;
}

Matrix to_matrix(const FeatureSet& fs, std::span<const std::size_t> rows) {
  Matrix m(rows.size(), fs.n_cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto src = fs.row(rows[i]);
    std::copy(src.begin(), src.end(), m.row(i).begin());
  }
  return m;
}

Matrix to_matrix(const FeatureSet& fs) {
  std::vector<std::size_t> rows(fs.n_rows);
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return to_matrix(fs, rows);
}

namespace {

template <typename Fn>
void for_each_chunk(std::size_t n, std::size_t chunk, Fn&& fn) {
  std::vector<std::size_t> rows;
  for (std::size_t start = 0; start < n; start += chunk) {
    const std::size_t end = std::min(n, start + chunk);
    rows.resize(end - start);
    std::iota(rows.begin(), rows.end(), start);
    fn(rows);
  }
}

}  // namespace

EpochStats evaluate(Network& net, const FeatureSet& fs, std::size_t batch_size) {
  if (fs.n_rows == 0) throw DataError("empty feature set");
  double loss = 0.0;
  std::size_t correct = 0;
  for_each_chunk(fs.n_rows, std::max<std::size_t>(batch_size, 1), [&](const std::vector<std::size_t>& rows) {
    std::vector<ClassLabel> labels;
    for (auto r : rows) labels.push_back(fs.labels[r]);
    const Matrix probs = net.forward(to_matrix(fs, rows), false);
    loss += net.loss(labels) * static_cast<double>(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) correct += argmax_class(probs.row(i)) == labels[i] ? 1 : 0;
  });
  const auto n = static_cast<double>(fs.n_rows);
  return {loss / n, static_cast<double>(correct) / n};
}

std::vector<ClassLabel> predict(Network& net, const FeatureSet& fs, std::size_t batch_size) {
  std::vector<ClassLabel> out;
  out.reserve(fs.n_rows);
  for_each_chunk(fs.n_rows, std::max<std::size_t>(batch_size, 1), [&](const std::vector<std::size_t>& rows) {
    auto p = predict(net, to_matrix(fs, rows));
    out.insert(out.end(), p.begin(), p.end());
  });
  return out;
}

TrainHistory train(Network& net, const FeatureSet& features, const TrainConfig& cfg) {
  cfg.validate();
  features.validate();
  if (features.n_rows == 0) throw DataError("no training rows");
  if (features.n_cols() != net.config().input_dim) throw ShapeError("feature width does not match network input_dim");
  const auto highs = std::count(features.labels.begin(), features.labels.end(), ClassLabel::high);
  if (highs == 0 || static_cast<std::size_t>(highs) == features.n_rows) {
    throw DataError("training data contains a single class");
  }

  if (cfg.standardize) net.set_column_stats(compute_column_stats(features));
  net.seed_dropout(cfg.seed ^ 0xD1B54A32D192ED03ull);

  std::mt19937_64 rng(cfg.seed);
  std::vector<std::size_t> order(features.n_rows);
  std::iota(order.begin(), order.end(), std::size_t{0});
  AdamOptimizer adam(net.parameter_count(), cfg);

  TrainHistory history;
  std::vector<std::size_t> rows;
  std::vector<ClassLabel> labels;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    if (cfg.shuffle) std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), start + cfg.batch_size);
      rows.assign(order.begin() + static_cast<std::ptrdiff_t>(start), order.begin() + static_cast<std::ptrdiff_t>(end));
      labels.clear();
      for (auto r : rows) labels.push_back(features.labels[r]);
      net.forward(to_matrix(features, rows), true);
      const auto grad = net.backward(labels);
      if (cfg.optimizer == OptimizerKind::adam) {
        adam.step(net.parameters(), grad);
      } else {
        auto params = net.parameters();
        for (std::size_t i = 0; i < params.size(); ++i) params[i] -= cfg.learning_rate * grad[i];
      }
    }
    history.epochs.push_back(evaluate(net, features));
  }
  return history;
}

}  // namespace neurobands
