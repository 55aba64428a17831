#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "neurobands/recording.hpp"

namespace neurobands {

// EEGB v1 container layout:
//   bytes 0-4   ASCII "EEGB1"
//   bytes 5-8   header length, little-endian uint32
//   header      UTF-8 JSON
//   payload     raw bytes (little-endian binary32 for every tensor we write)
inline constexpr char kMagic[5] = {'E', 'E', 'G', 'B', '1'};
inline constexpr std::size_t kPreambleSize = 9;

struct Container {
  nlohmann::json header;
  std::vector<std::uint8_t> payload;
};

Container read_container(const std::filesystem::path& path);
void write_container(const std::filesystem::path& path, const nlohmann::ordered_json& header,
                     std::span<const std::uint8_t> payload);

void write_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

// Serialized container bytes, for callers that need to compare or hash them.
std::vector<std::uint8_t> encode_container(const nlohmann::ordered_json& header,
                                           std::span<const std::uint8_t> payload);
Container decode_container(std::span<const std::uint8_t> bytes);

void append_f32_le(std::vector<std::uint8_t>& out, std::span<const float> values);
void append_f32_le(std::vector<std::uint8_t>& out, std::span<const double> values);
void append_u32_le(std::vector<std::uint8_t>& out, std::uint32_t v);
void append_i32_le(std::vector<std::uint8_t>& out, std::int32_t v);
float read_f32_le(const std::uint8_t* p);
std::uint32_t read_u32_le(const std::uint8_t* p);
std::int32_t read_i32_le(const std::uint8_t* p);

// Recording <-> EEGB v1. Header keys: version, subject_id, sample_rate_hz,
// n_trials, n_channels, n_samples, channel_names, labels.
Recording load_portable(const std::filesystem::path& path);
Recording decode_recording(const Container& c);
void write_portable(const std::filesystem::path& path, const Recording& rec);
std::vector<std::uint8_t> encode_recording(const Recording& rec);

}  // namespace neurobands
