#include "neurobands/montage.hpp"

#include <algorithm>
#include <bit>
#include <cctype>

namespace neurobands {

namespace {

constexpr std::array<std::string_view, kMontageSize> kGeneva = {
    "Fp1", "AF3", "F3", "F7", "FC5", "FC1", "C3", "T7", "CP5", "CP1", "P3",
    "P7",  "PO3", "O1", "Oz", "Pz",  "Fp2", "AF4", "Fz", "F4", "F8", "FC6",
    "FC2", "Cz",  "C4", "T8", "CP6", "CP2", "P4",  "P8", "PO4", "O2"};

constexpr std::array<std::string_view, 13> kFrontal = {
    "Fp1", "Fp2", "AF3", "AF4", "F7", "F8", "F3", "Fz", "F4", "FC5", "FC1", "FC2", "FC6"};
constexpr std::array<std::string_view, 9> kParietal = {"CP5", "CP1", "CP2", "CP6", "P7",
                                                       "P3",  "Pz",  "P4",  "P8"};
constexpr std::array<std::string_view, 5> kOccipital = {"PO3", "PO4", "O1", "Oz", "O2"};
constexpr std::array<std::string_view, 2> kTemporal = {"T7", "T8"};
constexpr std::array<std::string_view, 11> kCentral = {"FC5", "FC1", "FC2", "FC6", "C3", "Cz",
                                                       "C4",  "CP5", "CP1", "CP2", "CP6"};

std::array<ElectrodeId, kMontageSize> build_montage() {
  std::array<ElectrodeId, kMontageSize> out{};
  for (std::size_t i = 0; i < kMontageSize; ++i) {
    out[i].name = kGeneva[i];
    out[i].index = i;
  }
  for (Lobe lobe : kAllLobes) {
    for (auto name : lobe_members(lobe)) {
      auto it = std::find(kGeneva.begin(), kGeneva.end(), name);
      out[static_cast<std::size_t>(it - kGeneva.begin())].lobe_tags.add(lobe);
    }
  }
  return out;
}

}  // namespace

std::size_t LobeTags::size() const { return static_cast<std::size_t>(std::popcount(bits_)); }

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

std::string_view lobe_name(Lobe lobe) {
  switch (lobe) {
    case Lobe::frontal: return "Frontal";
    case Lobe::parietal: return "Parietal";
    case Lobe::occipital: return "Occipital";
    case Lobe::temporal: return "Temporal";
    case Lobe::central: return "Central";
  }
  return "?";
}

std::optional<Lobe> parse_lobe(std::string_view name) {
  for (Lobe lobe : kAllLobes) {
    if (iequals(name, lobe_name(lobe))) return lobe;
  }
  return std::nullopt;
}

std::span<const std::string_view> geneva_order() { return kGeneva; }

std::span<const ElectrodeId> montage() {
  static const auto table = build_montage();
  return table;
}

std::optional<ElectrodeId> find_electrode(std::string_view name) {
  for (const auto& e : montage()) {
    if (iequals(e.name, name)) return e;
  }
  return std::nullopt;
}

std::span<const std::string_view> lobe_members(Lobe lobe) {
  switch (lobe) {
    case Lobe::frontal: return kFrontal;
    case Lobe::parietal: return kParietal;
    case Lobe::occipital: return kOccipital;
    case Lobe::temporal: return kTemporal;
    case Lobe::central: return kCentral;
  }
  return {};
}

}  // namespace neurobands
