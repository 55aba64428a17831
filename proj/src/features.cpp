#include "neurobands/features.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "neurobands/errors.hpp"
#include "neurobands/portable_io.hpp"

namespace neurobands {

std::vector<std::string> feature_columns(const ElectrodeSet& set) {
  std::vector<std::string> cols;
  for (const auto& name : canonical_names(set)) {
    for (const auto& b : kBands) cols.push_back(name + "_" + std::string(band_label(b.name)));
  }
  return cols;
}

void FeatureSet::validate() const {
  if (matrix.size() != n_rows * n_cols()) throw ShapeError("feature matrix size != n_rows * n_cols");
  if (labels.size() != n_rows) throw ShapeError("labels size != n_rows");
  if (provenance.size() != n_rows) throw ShapeError("provenance size != n_rows");
}

FeatureSet FeatureSet::select_rows(std::span<const std::size_t> rows) const {
  FeatureSet out;
  out.electrode_set_id = electrode_set_id;
  out.columns = columns;
  out.n_rows = rows.size();
  out.matrix.reserve(rows.size() * n_cols());
  for (auto r : rows) {
    if (r >= n_rows) throw ShapeError("row index out of range");
    auto src = row(r);
    out.matrix.insert(out.matrix.end(), src.begin(), src.end());
    out.labels.push_back(labels[r]);
    out.provenance.push_back(provenance[r]);
  }
  return out;
}

void FeatureSet::append(const FeatureSet& other) {
  if (n_rows == 0 && columns.empty()) {
    *this = other;
    return;
  }
  if (other.columns != columns) throw ShapeError("cannot append feature sets with different columns");
  matrix.insert(matrix.end(), other.matrix.begin(), other.matrix.end());
  labels.insert(labels.end(), other.labels.begin(), other.labels.end());
  provenance.insert(provenance.end(), other.provenance.begin(), other.provenance.end());
  n_rows += other.n_rows;
}

FeatureSet extract_features(const Recording& rec, const ElectrodeSet& set, const WindowPlan& plan,
                            const LabelConfig& label_cfg, std::size_t jobs) {
  rec.validate();
  if (set.electrodes.empty()) throw SetIdError("electrode set is empty");
  const auto channels = resolve_indices(set, rec.channel_names);
  const std::size_t n_windows = window_count(rec.n_samples, plan);
  const auto classes = binarize(rec.labels, label_cfg);
  if (kBandsHighHz > rec.sample_rate_hz / 2) {
    throw BandError("sample rate too low for the 4-45 Hz bands");
  }

  FeatureSet fs;
  fs.electrode_set_id = set.id;
  fs.columns = feature_columns(set);
  fs.n_rows = rec.n_trials * n_windows;
  const std::size_t n_cols = fs.columns.size();
  fs.matrix.assign(fs.n_rows * n_cols, 0.0f);
  fs.labels.resize(fs.n_rows);
  fs.provenance.resize(fs.n_rows);

  const FftPlan fft_plan(plan.window_size);

  // Each trial owns a contiguous block of rows, so the schedule cannot
  // change the output.
  auto run_trial = [&](std::size_t t) {
    Spectrum spec;
    spec.rate_hz = rec.sample_rate_hz;
    spec.bins.resize(plan.window_size);
    for (std::size_t w = 0; w < n_windows; ++w) {
      const std::size_t r = t * n_windows + w;
      const std::size_t start = w * plan.step_size;
      float* out = fs.matrix.data() + r * n_cols;
      for (std::size_t e = 0; e < channels.size(); ++e) {
        auto window = rec.channel(t, channels[e]).subspan(start, plan.window_size);
        fft_plan.transform_real<float>(window, spec.bins);
        const auto powers = band_powers(spec);
        for (std::size_t b = 0; b < powers.size(); ++b) {
          out[e * kBands.size() + b] = static_cast<float>(std::log(powers[b] + kLogEpsilon));
        }
      }
      fs.labels[r] = classes[t];
      fs.provenance[r] = {rec.subject_id, static_cast<std::int32_t>(t), static_cast<std::int32_t>(start)};
    }
  };

  const std::size_t workers = std::clamp<std::size_t>(jobs, 1, rec.n_trials);
  if (workers == 1) {
    for (std::size_t t = 0; t < rec.n_trials; ++t) run_trial(t);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t k = 0; k < workers; ++k) {
      pool.emplace_back([&, k] {
        for (std::size_t t = k; t < rec.n_trials; t += workers) run_trial(t);
      });
    }
  }
  return fs;
}

FeatureSet extract_features(std::span<const Recording> recs, const ElectrodeSet& set, const WindowPlan& plan,
                            const LabelConfig& label_cfg, std::size_t jobs) {
  if (recs.empty()) throw DataError("no recordings given");
  FeatureSet all;
  for (const auto& rec : recs) all.append(extract_features(rec, set, plan, label_cfg, jobs));
  return all;
}

void write_features(const std::filesystem::path& path, const FeatureSet& fs) {
  fs.validate();
  nlohmann::ordered_json h;
  h["version"] = 1;
  h["kind"] = "features";
  h["electrode_set_id"] = fs.electrode_set_id;
  h["columns"] = fs.columns;
  h["n_rows"] = fs.n_rows;
  h["payload"] = {"matrix:f32", "labels:u8", "provenance:i32x3"};

  std::vector<std::uint8_t> payload;
  append_f32_le(payload, std::span<const float>(fs.matrix));
  for (auto l : fs.labels) payload.push_back(static_cast<std::uint8_t>(l));
  for (const auto& p : fs.provenance) {
    append_i32_le(payload, p.subject);
    append_i32_le(payload, p.trial);
    append_i32_le(payload, p.window_start);
  }
  write_container(path, h, payload);
}

FeatureSet load_features(const std::filesystem::path& path) {
  const auto c = read_container(path);
  const auto& h = c.header;
  if (h.value("kind", std::string{}) != "features") throw FormatError("container kind is not 'features'");
  FeatureSet fs;
  try {
    fs.electrode_set_id = h.at("electrode_set_id").get<std::string>();
    fs.columns = h.at("columns").get<std::vector<std::string>>();
    fs.n_rows = h.at("n_rows").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad features header: ") + e.what());
  }
  const std::size_t cells = fs.n_rows * fs.columns.size();
  const std::size_t expected = cells * 4 + fs.n_rows + fs.n_rows * 12;
  if (c.payload.size() != expected) throw TruncatedError("features payload size mismatch");
  const std::uint8_t* p = c.payload.data();
  fs.matrix.resize(cells);
  for (std::size_t i = 0; i < cells; ++i, p += 4) fs.matrix[i] = read_f32_le(p);
  fs.labels.resize(fs.n_rows);
  for (std::size_t i = 0; i < fs.n_rows; ++i, ++p) {
    if (*p > 1) throw FormatError("label byte must be 0 or 1");
    fs.labels[i] = static_cast<ClassLabel>(*p);
  }
  fs.provenance.resize(fs.n_rows);
  for (std::size_t i = 0; i < fs.n_rows; ++i, p += 12) {
    fs.provenance[i] = {read_i32_le(p), read_i32_le(p + 4), read_i32_le(p + 8)};
  }
  return fs;
}

}  // namespace neurobands
