#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace neurobands {

enum class BandName { delta, theta, alpha, beta, gamma };

// Half-open frequency interval [low_hz, high_hz).
struct BandDefinition {
  BandName name;
  double low_hz;
  double high_hz;

  constexpr bool contains(double f) const { return f >= low_hz && f < high_hz; }
};

// The five sub-bands tile [4, 45) Hz. The names are shifted one slot from
// the conventional EEG naming (here "Delta" is 4-8 Hz); the ranges are what
// matters and are kept as-is.
inline constexpr std::array<BandDefinition, 5> kBands = {{
    {BandName::delta, 4.0, 8.0},
    {BandName::theta, 8.0, 12.0},
    {BandName::alpha, 12.0, 16.0},
    {BandName::beta, 16.0, 25.0},
    {BandName::gamma, 25.0, 45.0},
}};

inline constexpr double kBandsLowHz = 4.0;
inline constexpr double kBandsHighHz = 45.0;

constexpr const BandDefinition& band(BandName name) { return kBands[static_cast<std::size_t>(name)]; }

std::string_view band_label(BandName name);  // "Delta", ...
std::optional<BandName> parse_band(std::string_view name);

}  // namespace neurobands
