#include "neurobands/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "neurobands/errors.hpp"

namespace neurobands {

namespace {

double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// out[o][l] = b[o] + sum_i sum_t w[o][i][t] * in[i][l + t - pad], zero padded.
void conv_forward(const double* in, std::size_t in_ch, std::size_t len, const double* w, const double* bias,
                  std::size_t out_ch, std::size_t k, double* out) {
  const auto pad = static_cast<std::ptrdiff_t>(k / 2);
  const auto L = static_cast<std::ptrdiff_t>(len);
  for (std::size_t o = 0; o < out_ch; ++o) {
    double* dst = out + o * len;
    std::fill(dst, dst + len, bias[o]);
    for (std::size_t i = 0; i < in_ch; ++i) {
      const double* src = in + i * len;
      for (std::size_t t = 0; t < k; ++t) {
        const double wt = w[(o * in_ch + i) * k + t];
        const std::ptrdiff_t shift = static_cast<std::ptrdiff_t>(t) - pad;
        const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, -shift);
        const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(L, L - shift);
        for (std::ptrdiff_t l = lo; l < hi; ++l) dst[l] += wt * src[l + shift];
      }
    }
  }
}

// Accumulates dW, db and (if din != nullptr) din for one sample.
void conv_backward(const double* in, std::size_t in_ch, std::size_t len, const double* w, std::size_t out_ch,
                   std::size_t k, const double* dout, double* dw, double* db, double* din) {
  const auto pad = static_cast<std::ptrdiff_t>(k / 2);
  const auto L = static_cast<std::ptrdiff_t>(len);
  for (std::size_t o = 0; o < out_ch; ++o) {
    const double* g = dout + o * len;
    double s = 0.0;
    for (std::size_t l = 0; l < len; ++l) s += g[l];
    db[o] += s;
    for (std::size_t i = 0; i < in_ch; ++i) {
      const double* src = in + i * len;
      double* dsrc = din ? din + i * len : nullptr;
      for (std::size_t t = 0; t < k; ++t) {
        const std::size_t widx = (o * in_ch + i) * k + t;
        const double wt = w[widx];
        const std::ptrdiff_t shift = static_cast<std::ptrdiff_t>(t) - pad;
        const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, -shift);
        const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(L, L - shift);
        double acc = 0.0;
        for (std::ptrdiff_t l = lo; l < hi; ++l) acc += g[l] * src[l + shift];
        dw[widx] += acc;
        if (dsrc) {
          for (std::ptrdiff_t l = lo; l < hi; ++l) dsrc[l + shift] += wt * g[l];
        }
      }
    }
  }
}

void relu_inplace(double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] = x[i] > 0.0 ? x[i] : 0.0;
}

// grad *= (activation > 0)
void relu_backward(const double* activation, double* grad, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    if (!(activation[i] > 0.0)) grad[i] = 0.0;
  }
}

}  // namespace

void NetworkConfig::validate() const {
  if (input_dim == 0 || conv_channels == 0 || kernel_size == 0 || dense_hidden == 0) {
    throw ConfigError("all dimensions must be positive");
  }
  if (kernel_size % 2 == 0) throw ConfigError("kernel size must be odd for same padding");
  if (input_dim < kernel_size) {
    throw ConfigError("input_dim " + std::to_string(input_dim) + " < kernel_size " + std::to_string(kernel_size));
  }
  if (n_classes != 2) throw ConfigError("only binary classification is supported");
  if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) throw ConfigError("dropout rate must lie in [0, 1)");
}

std::size_t Network::parameter_count(const NetworkConfig& cfg) {
  const std::size_t c = cfg.conv_channels, k = cfg.kernel_size, h = cfg.dense_hidden;
  const std::size_t stem = c * 1 * k + c;
  const std::size_t block = 2 * (c * c * k + c);
  const std::size_t dense = c * h + h + h * cfg.n_classes + cfg.n_classes;
  return stem + cfg.n_residual_blocks * block + dense;
}

void Network::add_block(const std::string& name, std::size_t size) {
  blocks_.push_back({name, params_.size(), size});
  params_.resize(params_.size() + size, 0.0);
}

Network::Conv Network::make_conv(const std::string& name, std::size_t in_ch, std::size_t out_ch) {
  Conv c{in_ch, out_ch, cfg_.kernel_size, 0, 0};
  c.w = params_.size();
  add_block(name + ".weight", out_ch * in_ch * c.k);
  c.b = params_.size();
  add_block(name + ".bias", out_ch);
  return c;
}

Network::Dense Network::make_dense(const std::string& name, std::size_t in, std::size_t out) {
  Dense d{in, out, 0, 0};
  d.w = params_.size();
  add_block(name + ".weight", out * in);
  d.b = params_.size();
  add_block(name + ".bias", out);
  return d;
}

Network::Network(const NetworkConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  const std::size_t c = cfg_.conv_channels;
  stem_ = make_conv("stem.conv", 1, c);
  for (std::size_t i = 0; i < cfg_.n_residual_blocks; ++i) {
    const std::string p = "block" + std::to_string(i);
    Conv a = make_conv(p + ".conv1", c, c);
    Conv b = make_conv(p + ".conv2", c, c);
    residual_.emplace_back(a, b);
  }
  hidden_ = make_dense("dense_hidden", c, cfg_.dense_hidden);
  output_ = make_dense("dense_out", cfg_.dense_hidden, cfg_.n_classes);

  // He-uniform weights, zero biases; blocks are visited in declared order.
  std::mt19937_64 rng(cfg_.seed);
  auto fill = [&](std::size_t offset, std::size_t count, std::size_t fan_in) {
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in));
    for (std::size_t i = 0; i < count; ++i) params_[offset + i] = limit * (2.0 * unit_uniform(rng) - 1.0);
  };
  fill(stem_.w, c * cfg_.kernel_size, cfg_.kernel_size);
  for (const auto& [a, b] : residual_) {
    fill(a.w, c * c * cfg_.kernel_size, c * cfg_.kernel_size);
    fill(b.w, c * c * cfg_.kernel_size, c * cfg_.kernel_size);
  }
  fill(hidden_.w, c * cfg_.dense_hidden, c);
  fill(output_.w, cfg_.dense_hidden * cfg_.n_classes, cfg_.dense_hidden);
  dropout_rng_.seed(cfg_.seed ^ 0x9E3779B97F4A7C15ull);
}

std::span<double> Network::block(const std::string& name) {
  for (const auto& b : blocks_) {
    if (b.name == name) return {params_.data() + b.offset, b.size};
  }
  throw ConfigError("no parameter block named " + name);
}

void Network::set_column_stats(ColumnStats stats) {
  if (stats.mean.size() != cfg_.input_dim || stats.stddev.size() != cfg_.input_dim) {
    throw ShapeError("column stats do not match input_dim");
  }
  stats_ = std::move(stats);
}

Matrix Network::forward(const Matrix& batch, bool train_mode) {
  const std::size_t B = batch.rows, L = cfg_.input_dim, C = cfg_.conv_channels, H = cfg_.dense_hidden;
  const std::size_t K = cfg_.n_classes;
  if (batch.cols != L) {
    throw ShapeError("batch has " + std::to_string(batch.cols) + " columns, network expects " + std::to_string(L));
  }
  if (B == 0) throw ShapeError("empty batch");

  Cache c;
  c.batch = B;
  c.input = batch.values;
  if (stats_) {
    for (std::size_t r = 0; r < B; ++r) {
      for (std::size_t j = 0; j < L; ++j) {
        const double sd = stats_->stddev[j] > 0.0 ? stats_->stddev[j] : 1.0;
        c.input[r * L + j] = (c.input[r * L + j] - stats_->mean[j]) / sd;
      }
    }
  }

  const double* p = params_.data();
  const std::size_t plane = C * L;
  c.stage.assign(residual_.size() + 1, std::vector<double>(B * plane));
  c.inner.assign(residual_.size(), std::vector<double>(B * plane));
  c.pooled.assign(B * C, 0.0);
  c.hidden.assign(B * H, 0.0);
  c.mask.assign(B * H, 1.0);
  c.probs = Matrix(B, K);

  const double keep = 1.0 - cfg_.dropout_rate;
  std::vector<double> logits(K);
  for (std::size_t s = 0; s < B; ++s) {
    double* x0 = c.stage[0].data() + s * plane;
    conv_forward(c.input.data() + s * L, 1, L, p + stem_.w, p + stem_.b, C, stem_.k, x0);
    relu_inplace(x0, plane);

    for (std::size_t i = 0; i < residual_.size(); ++i) {
      const auto& [a, b] = residual_[i];
      const double* in = c.stage[i].data() + s * plane;
      double* mid = c.inner[i].data() + s * plane;
      double* out = c.stage[i + 1].data() + s * plane;
      conv_forward(in, C, L, p + a.w, p + a.b, C, a.k, mid);
      relu_inplace(mid, plane);
      conv_forward(mid, C, L, p + b.w, p + b.b, C, b.k, out);
      for (std::size_t j = 0; j < plane; ++j) out[j] += in[j];
      relu_inplace(out, plane);
    }

    const double* last = c.stage.back().data() + s * plane;
    double* g = c.pooled.data() + s * C;
    for (std::size_t ch = 0; ch < C; ++ch) {
      double acc = 0.0;
      for (std::size_t l = 0; l < L; ++l) acc += last[ch * L + l];
      g[ch] = acc / static_cast<double>(L);
    }

    double* h = c.hidden.data() + s * H;
    double* m = c.mask.data() + s * H;
    for (std::size_t j = 0; j < H; ++j) {
      double acc = p[hidden_.b + j];
      const double* wrow = p + hidden_.w + j * C;
      for (std::size_t ch = 0; ch < C; ++ch) acc += wrow[ch] * g[ch];
      h[j] = acc > 0.0 ? acc : 0.0;
      if (train_mode && cfg_.dropout_rate > 0.0) m[j] = unit_uniform(dropout_rng_) < keep ? 1.0 / keep : 0.0;
    }

    for (std::size_t k = 0; k < K; ++k) {
      double acc = p[output_.b + k];
      const double* wrow = p + output_.w + k * H;
      for (std::size_t j = 0; j < H; ++j) acc += wrow[j] * h[j] * m[j];
      logits[k] = acc;
    }
    const double mx = *std::max_element(logits.begin(), logits.end());
    double z = 0.0;
    for (std::size_t k = 0; k < K; ++k) z += std::exp(logits[k] - mx);
    for (std::size_t k = 0; k < K; ++k) c.probs(s, k) = std::exp(logits[k] - mx) / z;
  }
  cache_ = std::move(c);
  return cache_->probs;
}

double Network::loss(std::span<const ClassLabel> labels) const {
  if (!cache_) throw StateError("loss requested before forward");
  if (labels.size() != cache_->batch) throw ShapeError("label count does not match cached batch");
  double total = 0.0;
  for (std::size_t s = 0; s < labels.size(); ++s) {
    const double p = cache_->probs(s, static_cast<std::size_t>(labels[s]));
    total -= std::log(std::max(p, std::numeric_limits<double>::min()));
  }
  return total / static_cast<double>(labels.size());
}

std::vector<double> Network::backward(std::span<const ClassLabel> labels) {
  if (!cache_) throw StateError("backward called before forward");
  const Cache& c = *cache_;
  const std::size_t B = c.batch, L = cfg_.input_dim, C = cfg_.conv_channels, H = cfg_.dense_hidden;
  const std::size_t K = cfg_.n_classes, plane = C * L;
  if (labels.size() != B) throw ShapeError("label count does not match cached batch");

  std::vector<double> grad(params_.size(), 0.0);
  const double* p = params_.data();
  double* gp = grad.data();

  std::vector<double> dlogits(K), dh(H), dg(C);
  std::vector<double> dstage(plane), dmid(plane), dprev(plane);
  const double invB = 1.0 / static_cast<double>(B);

  for (std::size_t s = 0; s < B; ++s) {
    for (std::size_t k = 0; k < K; ++k) {
      const double target = static_cast<std::size_t>(labels[s]) == k ? 1.0 : 0.0;
      dlogits[k] = (c.probs(s, k) - target) * invB;
    }

    const double* h = c.hidden.data() + s * H;
    const double* m = c.mask.data() + s * H;
    std::fill(dh.begin(), dh.end(), 0.0);
    for (std::size_t k = 0; k < K; ++k) {
      gp[output_.b + k] += dlogits[k];
      const double* wrow = p + output_.w + k * H;
      double* gw = gp + output_.w + k * H;
      for (std::size_t j = 0; j < H; ++j) {
        gw[j] += dlogits[k] * h[j] * m[j];
        dh[j] += wrow[j] * dlogits[k];
      }
    }
    for (std::size_t j = 0; j < H; ++j) dh[j] *= m[j];
    relu_backward(h, dh.data(), H);

    const double* g = c.pooled.data() + s * C;
    std::fill(dg.begin(), dg.end(), 0.0);
    for (std::size_t j = 0; j < H; ++j) {
      gp[hidden_.b + j] += dh[j];
      const double* wrow = p + hidden_.w + j * C;
      double* gw = gp + hidden_.w + j * C;
      for (std::size_t ch = 0; ch < C; ++ch) {
        gw[ch] += dh[j] * g[ch];
        dg[ch] += wrow[ch] * dh[j];
      }
    }

    for (std::size_t ch = 0; ch < C; ++ch) {
      std::fill_n(dstage.begin() + static_cast<std::ptrdiff_t>(ch * L), L, dg[ch] / static_cast<double>(L));
    }

    for (std::size_t i = residual_.size(); i-- > 0;) {
      const auto& [a, b] = residual_[i];
      const double* in = c.stage[i].data() + s * plane;
      const double* mid = c.inner[i].data() + s * plane;
      const double* out = c.stage[i + 1].data() + s * plane;
      // through the final ReLU; the sum's gradient feeds both branches
      relu_backward(out, dstage.data(), plane);
      std::fill(dmid.begin(), dmid.end(), 0.0);
      conv_backward(mid, C, L, p + b.w, C, b.k, dstage.data(), gp + b.w, gp + b.b, dmid.data());
      relu_backward(mid, dmid.data(), plane);
      std::copy(dstage.begin(), dstage.end(), dprev.begin());
      conv_backward(in, C, L, p + a.w, C, a.k, dmid.data(), gp + a.w, gp + a.b, dprev.data());
      dstage.swap(dprev);
    }

    relu_backward(c.stage[0].data() + s * plane, dstage.data(), plane);
    conv_backward(c.input.data() + s * L, 1, L, p + stem_.w, C, stem_.k, dstage.data(), gp + stem_.w, gp + stem_.b,
                  nullptr);
  }
  return grad;
}

std::span<const double> Network::block_output(std::size_t sample, std::size_t block_index) const {
  if (!cache_) throw StateError("no cached forward pass");
  if (block_index >= residual_.size() || sample >= cache_->batch) throw ShapeError("index out of range");
  const std::size_t plane = cfg_.conv_channels * cfg_.input_dim;
  return {cache_->stage[block_index + 1].data() + sample * plane, plane};
}

std::span<const double> Network::block_input(std::size_t sample, std::size_t block_index) const {
  if (!cache_) throw StateError("no cached forward pass");
  if (block_index >= residual_.size() || sample >= cache_->batch) throw ShapeError("index out of range");
  const std::size_t plane = cfg_.conv_channels * cfg_.input_dim;
  return {cache_->stage[block_index].data() + sample * plane, plane};
}

Network build_network(const NetworkConfig& cfg) { return Network(cfg); }

ClassLabel argmax_class(std::span<const double> probs) {
  if (probs.size() != 2) throw ShapeError("expected two class probabilities");
  return probs[1] > probs[0] ? ClassLabel::high : ClassLabel::low;
}

std::vector<ClassLabel> predict(Network& net, const Matrix& batch) {
  const Matrix probs = net.forward(batch, false);
  std::vector<ClassLabel> out;
  out.reserve(probs.rows);
  for (std::size_t i = 0; i < probs.rows; ++i) out.push_back(argmax_class(probs.row(i)));
  return out;
}

}  // namespace neurobands
