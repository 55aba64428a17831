#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "neurobands/montage.hpp"

namespace neurobands {

struct ElectrodeSet {
  std::string id;                       // "set01".."set09", a lobe name, or "custom"
  std::vector<std::string> electrodes;  // spelled as published; resolved case-insensitively
  std::string provenance;
  std::optional<double> prior_accuracy;  // percent, as previously reported

  std::size_t size() const { return electrodes.size(); }
  friend bool operator==(const ElectrodeSet&, const ElectrodeSet&) = default;
};

inline constexpr int kLiteratureSetCount = 9;

ElectrodeSet lobe_set(Lobe lobe);
ElectrodeSet lobe_set(std::string_view lobe);  // throws LobeError
ElectrodeSet literature_set(int n);            // n in [1, 9], throws SetIdError

std::vector<ElectrodeSet> literature_sets();
std::vector<ElectrodeSet> lobe_sets();

// Builds an ad-hoc set; every name must resolve and appear once.
ElectrodeSet custom_set(std::vector<std::string> electrodes, std::string id = "custom");

// Channel indices of the set's electrodes in declared order. `channels` is
// the recording's channel list; the default is the full Geneva montage.
std::vector<std::size_t> resolve_indices(const ElectrodeSet& set, std::span<const std::string> channels);
std::vector<std::size_t> resolve_indices(const ElectrodeSet& set);

// Canonical montage spelling of each electrode ("FP1" -> "Fp1").
std::vector<std::string> canonical_names(const ElectrodeSet& set);

// Selector grammar:
//   setNN | all | lobe:NAME | lobes | custom:E1,E2,...
// Non-custom selectors may be comma-separated ("set01,set04,lobe:temporal").
std::vector<ElectrodeSet> parse_selector(std::string_view selector);

nlohmann::ordered_json to_json(const ElectrodeSet& set);
ElectrodeSet electrode_set_from_json(const nlohmann::json& j);

}  // namespace neurobands
