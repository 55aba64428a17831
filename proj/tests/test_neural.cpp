#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "neurobands/checkpoint.hpp"
#include "neurobands/errors.hpp"
#include "neurobands/network.hpp"
#include "neurobands/train.hpp"
#include "test_util.hpp"

using namespace neurobands;

namespace {

Matrix random_batch(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Matrix m(rows, cols);
  m.values = testutil::random_signal(rows * cols, rng);
  return m;
}

std::vector<ClassLabel> alternating(std::size_t n) {
  std::vector<ClassLabel> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = i % 2 ? ClassLabel::high : ClassLabel::low;
  return y;
}

// Two Gaussian blobs, shifted apart along every column.
FeatureSet blobs(std::size_t rows, std::size_t cols, double sep, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(0.0, 1.0);
  FeatureSet fs;
  fs.electrode_set_id = "blobs";
  for (std::size_t j = 0; j < cols; ++j) fs.columns.push_back("c" + std::to_string(j));
  fs.n_rows = rows;
  for (std::size_t r = 0; r < rows; ++r) {
    const ClassLabel y = r % 2 ? ClassLabel::high : ClassLabel::low;
    for (std::size_t j = 0; j < cols; ++j) {
      fs.matrix.push_back(static_cast<float>(d(rng) + (y == ClassLabel::high ? sep : 0.0) + 10.0));
    }
    fs.labels.push_back(y);
    fs.provenance.push_back({1, static_cast<std::int32_t>(r / 8), static_cast<std::int32_t>(16 * (r % 8))});
  }
  return fs;
}

NetworkConfig tiny_config() {
  NetworkConfig cfg;
  cfg.input_dim = 10;
  cfg.conv_channels = 4;
  cfg.dense_hidden = 6;
  cfg.seed = 5;
  return cfg;
}

double mean_ce(Network& net, const Matrix& x, std::span<const ClassLabel> y) {
  const Matrix p = net.forward(x, false);
  double s = 0;
  for (std::size_t i = 0; i < x.rows; ++i) s -= std::log(p(i, static_cast<std::size_t>(y[i])));
  return s / static_cast<double>(x.rows);
}

}  // namespace

TEST_CASE("config validation") {
  NetworkConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.input_dim = 2;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.kernel_size = 4;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.conv_channels = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.dropout_rate = 1.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  CHECK_THROWS_AS(build_network(cfg), ConfigError);
}

TEST_CASE("parameter count for the default config") {
  // stem 32*3+32, block 2*(32*32*3+32), hidden 32*128+128, out 128*2+2
  CHECK(Network::parameter_count(NetworkConfig{}) == 10818);
  CHECK(build_network(NetworkConfig{}).parameter_count() == 10818);
  NetworkConfig two = {};
  two.n_residual_blocks = 2;
  CHECK(Network::parameter_count(two) == 10818 + 6208);
  NetworkConfig narrow = {};
  narrow.input_dim = 60;
  CHECK(Network::parameter_count(narrow) == 10818);
}

TEST_CASE("initialization is deterministic and He-uniform") {
  NetworkConfig cfg;
  cfg.seed = 9;
  const Network a = build_network(cfg), b = build_network(cfg);
  CHECK(std::equal(a.parameters().begin(), a.parameters().end(), b.parameters().begin()));
  cfg.seed = 10;
  const Network c = build_network(cfg);
  CHECK_FALSE(std::equal(a.parameters().begin(), a.parameters().end(), c.parameters().begin()));

  Network n = build_network(NetworkConfig{});
  const auto& blocks = n.parameter_blocks();
  REQUIRE(blocks.size() == 10);
  CHECK(blocks.front().name == "stem.conv.weight");
  CHECK(blocks.back().name == "dense_out.bias");
  for (const auto& blk : blocks) {
    const auto v = n.block(blk.name);
    if (blk.name.ends_with("bias")) {
      CHECK(std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; }));
    }
  }
  // Stem fan-in is 1 * 3: bound sqrt(6/3).
  const auto stem = n.block("stem.conv.weight");
  CHECK(*std::max_element(stem.begin(), stem.end()) <= std::sqrt(2.0));
  const auto hid = n.block("dense_hidden.weight");
  CHECK(*std::max_element(hid.begin(), hid.end()) <= std::sqrt(6.0 / 32.0));
  CHECK(*std::min_element(hid.begin(), hid.end()) >= -std::sqrt(6.0 / 32.0));
  CHECK_THROWS(n.block("nope"));
}

TEST_CASE("forward is a proper softmax") {
  for (std::size_t d : {60, 160}) {
    NetworkConfig cfg;
    cfg.input_dim = d;
    Network net = build_network(cfg);
    const Matrix x = random_batch(7, d, d);
    const Matrix p = net.forward(x, false);
    CHECK(p.rows == 7);
    CHECK(p.cols == 2);
    for (std::size_t i = 0; i < 7; ++i) {
      CHECK(std::abs(p(i, 0) + p(i, 1) - 1.0) < 1e-9);
      CHECK(p(i, 0) > 0.0);
      CHECK(p(i, 0) < 1.0);
    }
  }
  Network net = build_network(NetworkConfig{});
  CHECK_THROWS_AS(net.forward(random_batch(2, 60, 1), false), ShapeError);
}

TEST_CASE("duplicate rows give duplicate outputs in eval mode") {
  Network net = build_network(tiny_config());
  Matrix x = random_batch(3, 10, 2);
  std::copy(x.row(0).begin(), x.row(0).end(), x.row(2).begin());
  const Matrix p = net.forward(x, false);
  CHECK(p(0, 0) == p(2, 0));
  CHECK(p(0, 1) == p(2, 1));
}

TEST_CASE("zeroed residual branch is the pure skip path") {
  Network net = build_network(NetworkConfig{});
  for (const char* name : {"block0.conv1.weight", "block0.conv1.bias", "block0.conv2.weight", "block0.conv2.bias"}) {
    auto v = net.block(name);
    std::fill(v.begin(), v.end(), 0.0);
  }
  net.forward(random_batch(2, 160, 3), false);
  for (std::size_t s = 0; s < 2; ++s) {
    const auto in = net.block_input(s, 0);
    const auto out = net.block_output(s, 0);
    REQUIRE(in.size() == out.size());
    for (std::size_t i = 0; i < in.size(); ++i) CHECK(out[i] == std::max(in[i], 0.0));
  }
}

TEST_CASE("dropout only in train mode") {
  NetworkConfig cfg = tiny_config();
  cfg.dropout_rate = 0.5;
  Network net = build_network(cfg);
  const Matrix x = random_batch(16, 10, 4);
  const Matrix e1 = net.forward(x, false), e2 = net.forward(x, false);
  CHECK(e1.values == e2.values);
  net.seed_dropout(1);
  const Matrix t1 = net.forward(x, true);
  net.seed_dropout(1);
  const Matrix t2 = net.forward(x, true);
  CHECK(t1.values == t2.values);
  CHECK(t1.values != e1.values);
}

TEST_CASE("backward matches central finite differences") {
  for (std::size_t blocks : {1, 2}) {
    NetworkConfig cfg = tiny_config();
    cfg.n_residual_blocks = blocks;
    Network net = build_network(cfg);
    // Nonzero biases keep ReLU inputs away from the kink at 0.
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(-0.3, 0.3);
    for (const auto& blk : net.parameter_blocks()) {
      if (blk.name.ends_with("bias")) {
        for (auto& v : net.block(blk.name)) v = u(rng);
      }
    }
    const Matrix x = random_batch(5, 10, 8);
    const auto y = alternating(5);
    net.forward(x, false);
    const auto grad = net.backward(y);
    REQUIRE(grad.size() == net.parameter_count());

    auto params = net.parameters();
    const double h = 1e-5;
    double worst = 0;
    for (std::size_t i = 0; i < params.size(); ++i) {
      const double keep = params[i];
      params[i] = keep + h;
      const double up = mean_ce(net, x, y);
      params[i] = keep - h;
      const double down = mean_ce(net, x, y);
      params[i] = keep;
      const double numeric = (up - down) / (2 * h);
      const double rel = std::abs(numeric - grad[i]) / std::max({std::abs(numeric), std::abs(grad[i]), 1e-7});
      worst = std::max(worst, rel);
      CHECK(std::isfinite(grad[i]));
    }
    CHECK(worst < 1e-4);
  }
}

TEST_CASE("loss and backward need a cached forward") {
  Network net = build_network(tiny_config());
  const auto y = alternating(2);
  CHECK_THROWS_AS(net.backward(y), StateError);
  CHECK_THROWS_AS(net.loss(y), StateError);
  const Matrix x = random_batch(2, 10, 1);
  net.forward(x, false);
  CHECK(net.loss(y) == doctest::Approx(mean_ce(net, x, y)).epsilon(1e-12));
  CHECK_THROWS_AS(net.backward(alternating(3)), ShapeError);
}

TEST_CASE("argmax ties go to class 0") {
  const double a[] = {0.9, 0.1}, b[] = {0.5, 0.5}, c[] = {0.2, 0.8};
  CHECK(argmax_class(a) == ClassLabel::low);
  CHECK(argmax_class(b) == ClassLabel::low);
  CHECK(argmax_class(c) == ClassLabel::high);
}

TEST_CASE("column stats are applied inside forward") {
  Network net = build_network(tiny_config());
  Matrix x = random_batch(4, 10, 12);
  ColumnStats st;
  st.mean.assign(10, 3.0);
  st.stddev.assign(10, 2.0);
  Matrix shifted = x;
  for (auto& v : shifted.values) v = v * 2.0 + 3.0;
  const Matrix raw = net.forward(x, false);
  net.set_column_stats(st);
  const Matrix normed = net.forward(shifted, false);
  for (std::size_t i = 0; i < raw.values.size(); ++i) CHECK(normed.values[i] == doctest::Approx(raw.values[i]).epsilon(1e-12));
}

TEST_CASE("Adam first step moves each parameter by about lr") {
  TrainConfig cfg;
  AdamOptimizer opt(3, cfg);
  std::vector<double> p = {1.0, 2.0, 3.0};
  const std::vector<double> g = {0.5, -2.0, 1e-3};
  opt.step(p, g);
  CHECK(p[0] == doctest::Approx(1.0 - 1e-3).epsilon(1e-6));
  CHECK(p[1] == doctest::Approx(2.0 + 1e-3).epsilon(1e-6));
  CHECK(p[2] == doctest::Approx(3.0 - 1e-3 * 1e-3 / (1e-3 + 1e-8)).epsilon(1e-6));
}

TEST_CASE("compute_column_stats") {
  FeatureSet fs = blobs(10, 3, 0.0, 1);
  const ColumnStats st = compute_column_stats(fs);
  for (std::size_t j = 0; j < 3; ++j) {
    double m = 0;
    for (std::size_t r = 0; r < 10; ++r) m += fs.row(r)[j];
    m /= 10;
    double v = 0;
    for (std::size_t r = 0; r < 10; ++r) v += (fs.row(r)[j] - m) * (fs.row(r)[j] - m);
    CHECK(st.mean[j] == doctest::Approx(m).epsilon(1e-12));
    CHECK(st.stddev[j] == doctest::Approx(std::sqrt(v / 10)).epsilon(1e-9));
  }
}

TEST_CASE("training reaches the optimum on separable features") {
  const FeatureSet fs = blobs(256, 20, 3.0, 2);
  NetworkConfig nc;
  nc.input_dim = 20;
  Network net = build_network(nc);
  TrainConfig tc;
  const TrainHistory h = train(net, fs, tc);
  REQUIRE(h.epochs.size() == 50);
  CHECK(h.epochs.back().accuracy >= 0.99);
  CHECK(h.epochs.back().loss < h.epochs.front().loss);
  CHECK(net.column_stats().has_value());
}

TEST_CASE("zero learning rate leaves parameters unchanged") {
  const FeatureSet fs = blobs(32, 10, 1.0, 3);
  Network net = build_network(tiny_config());
  const std::vector<double> before(net.parameters().begin(), net.parameters().end());
  TrainConfig tc;
  tc.epochs = 3;
  tc.learning_rate = 0.0;
  const auto h = train(net, fs, tc);
  CHECK(std::equal(before.begin(), before.end(), net.parameters().begin()));
  CHECK(h.epochs[0].loss == h.epochs[2].loss);
}

TEST_CASE("full-batch gradient descent does not increase the loss") {
  const FeatureSet fs = blobs(40, 10, 0.5, 4);
  NetworkConfig nc = tiny_config();
  nc.dropout_rate = 0.0;
  Network net = build_network(nc);
  TrainConfig tc;
  tc.epochs = 20;
  tc.learning_rate = 1e-4;
  tc.optimizer = OptimizerKind::sgd;
  tc.batch_size = fs.n_rows;
  const auto h = train(net, fs, tc);
  for (std::size_t e = 1; e < h.epochs.size(); ++e) CHECK(h.epochs[e].loss <= h.epochs[e - 1].loss);
}

TEST_CASE("training is deterministic") {
  const FeatureSet fs = blobs(64, 10, 1.0, 5);
  TrainConfig tc;
  tc.epochs = 4;
  tc.batch_size = 16;
  Network a = build_network(tiny_config()), b = build_network(tiny_config());
  const auto ha = train(a, fs, tc), hb = train(b, fs, tc);
  CHECK(ha == hb);
  CHECK(std::equal(a.parameters().begin(), a.parameters().end(), b.parameters().begin()));
}

TEST_CASE("training input checks") {
  FeatureSet one = blobs(8, 10, 0.0, 6);
  std::fill(one.labels.begin(), one.labels.end(), ClassLabel::low);
  Network net = build_network(tiny_config());
  CHECK_THROWS_AS(train(net, one, TrainConfig{}), DataError);
  CHECK_THROWS_AS(train(net, blobs(8, 12, 0.0, 6), TrainConfig{}), ShapeError);
  TrainConfig bad;
  bad.epochs = 0;
  CHECK_THROWS_AS(train(net, blobs(8, 10, 0.0, 6), bad), ConfigError);
  bad = {};
  bad.batch_size = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("model checkpoint round trip") {
  testutil::TempDir dir("neural");
  const FeatureSet fs = blobs(32, 10, 1.0, 7);
  Network net = build_network(tiny_config());
  TrainConfig tc;
  tc.epochs = 2;
  train(net, fs, tc);
  save_model(dir / "m.eegb", net);
  Network back = load_model(dir / "m.eegb");
  CHECK(back.config() == net.config());
  CHECK(back.column_stats() == net.column_stats());
  const Matrix x = to_matrix(fs);
  const Matrix pa = net.forward(x, false), pb = back.forward(x, false);
  for (std::size_t i = 0; i < pa.values.size(); ++i) CHECK(pb.values[i] == doctest::Approx(pa.values[i]).epsilon(1e-5));
  for (std::size_t i = 0; i < net.parameter_count(); ++i) {
    CHECK(back.parameters()[i] == static_cast<double>(static_cast<float>(net.parameters()[i])));
  }
}
