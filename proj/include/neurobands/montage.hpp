#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace neurobands {

enum class Lobe { frontal, parietal, occipital, temporal, central };

inline constexpr std::array<Lobe, 5> kAllLobes = {Lobe::frontal, Lobe::parietal, Lobe::occipital,
                                                  Lobe::temporal, Lobe::central};

std::string_view lobe_name(Lobe lobe);          // "Frontal", ...
std::optional<Lobe> parse_lobe(std::string_view name);  // case-insensitive

// Bitmask of Lobe values; FC* and CP* electrodes carry two tags.
class LobeTags {
 public:
  constexpr LobeTags() = default;
  constexpr void add(Lobe l) { bits_ |= bit(l); }
  constexpr bool contains(Lobe l) const { return (bits_ & bit(l)) != 0; }
  constexpr bool empty() const { return bits_ == 0; }
  std::size_t size() const;
  friend constexpr bool operator==(LobeTags, LobeTags) = default;

 private:
  static constexpr unsigned bit(Lobe l) { return 1u << static_cast<unsigned>(l); }
  unsigned bits_ = 0;
};

struct ElectrodeId {
  std::string_view name;
  std::size_t index = 0;  // position in Geneva order
  LobeTags lobe_tags;
};

inline constexpr std::size_t kMontageSize = 32;

// The 32 EEG electrodes of the DEAP preprocessed files, in Geneva order.
std::span<const std::string_view> geneva_order();

// Full montage with lobe tags, indexed like geneva_order().
std::span<const ElectrodeId> montage();

// Case-insensitive lookup ("FP1" and "Fp1" both resolve).
std::optional<ElectrodeId> find_electrode(std::string_view name);

// Electrodes of one lobe in table order (not Geneva order).
std::span<const std::string_view> lobe_members(Lobe lobe);

bool iequals(std::string_view a, std::string_view b);

}  // namespace neurobands
