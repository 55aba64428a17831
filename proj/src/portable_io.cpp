#include "neurobands/portable_io.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "neurobands/errors.hpp"

namespace neurobands {

namespace fs = std::filesystem;

void append_u32_le(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFFu));
}

void append_i32_le(std::vector<std::uint8_t>& out, std::int32_t v) {
  append_u32_le(out, std::bit_cast<std::uint32_t>(v));
}

void append_f32_le(std::vector<std::uint8_t>& out, std::span<const float> values) {
  out.reserve(out.size() + values.size() * 4);
  for (float f : values) append_u32_le(out, std::bit_cast<std::uint32_t>(f));
}

void append_f32_le(std::vector<std::uint8_t>& out, std::span<const double> values) {
  out.reserve(out.size() + values.size() * 4);
  for (double d : values) append_u32_le(out, std::bit_cast<std::uint32_t>(static_cast<float>(d)));
}

std::uint32_t read_u32_le(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::int32_t read_i32_le(const std::uint8_t* p) { return std::bit_cast<std::int32_t>(read_u32_le(p)); }

float read_f32_le(const std::uint8_t* p) { return std::bit_cast<float>(read_u32_le(p)); }

std::vector<std::uint8_t> encode_container(const nlohmann::ordered_json& header,
                                           std::span<const std::uint8_t> payload) {
  const std::string text = header.dump();
  std::vector<std::uint8_t> out;
  out.reserve(kPreambleSize + text.size() + payload.size());
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  append_u32_le(out, static_cast<std::uint32_t>(text.size()));
  out.insert(out.end(), text.begin(), text.end());
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

Container decode_container(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kPreambleSize || !std::equal(std::begin(kMagic), std::end(kMagic), bytes.begin(),
                                                  [](char m, std::uint8_t b) { return static_cast<std::uint8_t>(m) == b; })) {
    throw FormatError("missing EEGB1 magic");
  }
  const std::uint32_t header_len = read_u32_le(bytes.data() + 5);
  if (bytes.size() - kPreambleSize < header_len) throw TruncatedError("header extends past end of file");
  Container c;
  const auto* hbegin = reinterpret_cast<const char*>(bytes.data() + kPreambleSize);
  try {
    c.header = nlohmann::json::parse(hbegin, hbegin + header_len);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("header is not valid JSON: ") + e.what());
  }
  if (!c.header.is_object()) throw FormatError("header is not a JSON object");
  c.payload.assign(bytes.begin() + kPreambleSize + header_len, bytes.end());
  return c;
}

Container read_container(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_container(bytes);
}

void write_bytes(const fs::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

void write_container(const fs::path& path, const nlohmann::ordered_json& header,
                     std::span<const std::uint8_t> payload) {
  write_bytes(path, encode_container(header, payload));
}

namespace {

template <typename T>
T header_field(const nlohmann::json& h, const char* key) {
  if (!h.contains(key)) throw FormatError(std::string("header missing '") + key + "'");
  try {
    return h.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw FormatError(std::string("header field '") + key + "' has the wrong type");
  }
}

}  // namespace

Recording decode_recording(const Container& c) {
  const auto& h = c.header;
  if (h.contains("kind") && h["kind"] != "recording") {
    throw FormatError("container kind is not a recording");
  }
  if (header_field<int>(h, "version") != 1) throw FormatError("unsupported version");

  Recording rec;
  rec.subject_id = header_field<int>(h, "subject_id");
  rec.sample_rate_hz = header_field<double>(h, "sample_rate_hz");
  rec.n_trials = header_field<std::size_t>(h, "n_trials");
  rec.n_channels = header_field<std::size_t>(h, "n_channels");
  rec.n_samples = header_field<std::size_t>(h, "n_samples");
  rec.channel_names = header_field<std::vector<std::string>>(h, "channel_names");
  auto labels = header_field<std::vector<std::vector<double>>>(h, "labels");

  const std::size_t count = rec.n_trials * rec.n_channels * rec.n_samples;
  if (c.payload.size() != count * 4) {
    throw TruncatedError("payload has " + std::to_string(c.payload.size()) + " bytes, header declares " +
                         std::to_string(count * 4));
  }
  if (rec.channel_names.size() != rec.n_channels) {
    throw TruncatedError("channel_names has " + std::to_string(rec.channel_names.size()) + " entries, n_channels is " +
                         std::to_string(rec.n_channels));
  }
  if (labels.size() != rec.n_trials) throw TruncatedError("labels rows != n_trials");
  check_channel_names(rec.channel_names);

  rec.labels.reserve(labels.size());
  for (const auto& row : labels) {
    if (row.size() != 4) throw FormatError("label rows must have 4 columns");
    rec.labels.push_back({row[0], row[1], row[2], row[3]});
  }
  rec.data.resize(count);
  for (std::size_t i = 0; i < count; ++i) rec.data[i] = read_f32_le(c.payload.data() + 4 * i);
  return rec;
}

Recording load_portable(const fs::path& path) { return decode_recording(read_container(path)); }

std::vector<std::uint8_t> encode_recording(const Recording& rec) {
  rec.validate();
  nlohmann::ordered_json h;
  h["version"] = 1;
  h["subject_id"] = rec.subject_id;
  h["sample_rate_hz"] = rec.sample_rate_hz;
  h["n_trials"] = rec.n_trials;
  h["n_channels"] = rec.n_channels;
  h["n_samples"] = rec.n_samples;
  h["channel_names"] = rec.channel_names;
  auto labels = nlohmann::ordered_json::array();
  for (const auto& row : rec.labels) labels.push_back({row[0], row[1], row[2], row[3]});
  h["labels"] = std::move(labels);

  std::vector<std::uint8_t> payload;
  append_f32_le(payload, std::span<const float>(rec.data));
  return encode_container(h, payload);
}

void write_portable(const fs::path& path, const Recording& rec) { write_bytes(path, encode_recording(rec)); }

}  // namespace neurobands
