#include "neurobands/checkpoint.hpp"

#include "neurobands/errors.hpp"
#include "neurobands/portable_io.hpp"

namespace neurobands {

void save_model(const std::filesystem::path& path, const Network& net) {
  const auto& cfg = net.config();
  nlohmann::ordered_json h;
  h["version"] = 1;
  h["kind"] = "model";
  h["config"] = {{"input_dim", cfg.input_dim},
                 {"conv_channels", cfg.conv_channels},
                 {"kernel_size", cfg.kernel_size},
                 {"n_residual_blocks", cfg.n_residual_blocks},
                 {"dense_hidden", cfg.dense_hidden},
                 {"dropout_rate", cfg.dropout_rate},
                 {"n_classes", cfg.n_classes},
                 {"seed", cfg.seed}};
  auto layers = nlohmann::ordered_json::array();
  for (const auto& b : net.parameter_blocks()) layers.push_back({{"name", b.name}, {"size", b.size}});
  h["layers"] = std::move(layers);
  if (const auto& st = net.column_stats()) {
    h["column_stats"] = {{"mean", st->mean}, {"stddev", st->stddev}};
  } else {
    h["column_stats"] = nullptr;
  }
  std::vector<std::uint8_t> payload;
  append_f32_le(payload, net.parameters());
  write_container(path, h, payload);
}

Network load_model(const std::filesystem::path& path) {
  const auto c = read_container(path);
  const auto& h = c.header;
  if (h.value("kind", std::string{}) != "model") throw FormatError("container kind is not 'model'");
  NetworkConfig cfg;
  try {
    const auto& j = h.at("config");
    cfg.input_dim = j.at("input_dim").get<std::size_t>();
    cfg.conv_channels = j.at("conv_channels").get<std::size_t>();
    cfg.kernel_size = j.at("kernel_size").get<std::size_t>();
    cfg.n_residual_blocks = j.at("n_residual_blocks").get<std::size_t>();
    cfg.dense_hidden = j.at("dense_hidden").get<std::size_t>();
    cfg.dropout_rate = j.at("dropout_rate").get<double>();
    cfg.n_classes = j.at("n_classes").get<std::size_t>();
    cfg.seed = j.at("seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad model header: ") + e.what());
  }
  Network net(cfg);
  if (c.payload.size() != net.parameter_count() * 4) throw TruncatedError("model payload size mismatch");
  auto params = net.parameters();
  for (std::size_t i = 0; i < params.size(); ++i) params[i] = read_f32_le(c.payload.data() + 4 * i);
  if (h.contains("column_stats") && !h["column_stats"].is_null()) {
    ColumnStats st;
    st.mean = h["column_stats"].at("mean").get<std::vector<double>>();
    st.stddev = h["column_stats"].at("stddev").get<std::vector<double>>();
    net.set_column_stats(std::move(st));
  }
  return net;
}

}  // namespace neurobands
