#include "neurobands/electrode_sets.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>

#include "neurobands/errors.hpp"

namespace neurobands {

namespace {

struct LiteratureRow {
  const char* provenance;
  std::vector<std::string> electrodes;
  double prior_accuracy;
};

const std::array<LiteratureRow, kLiteratureSetCount>& literature_rows() {
  static const std::array<LiteratureRow, kLiteratureSetCount> rows = {{
      {"Zhang et al. (mRMR)", {"F7", "P8", "O1", "F8", "C4", "T7", "PO3", "Fp1", "Fp2", "O2", "P3", "Fz"}, 90.0},
      {"Zhang et al. (ReliefF)", {"PO3", "F8", "Fp1", "P3", "Fp2", "F3", "O2", "P8", "Oz", "F7", "T8", "Cz"}, 90.0},
      {"Goshvarpour et al. (sLORETA)", {"FP1", "C3", "Cp1", "P3", "Pz"}, 98.97},
      {"Joshi et al. (Prefrontal)", {"FP1", "AF3", "FP2", "AF4"}, 73.37},
      {"Wang et al. (NMI)", {"FC1", "P3", "Pz", "Oz", "CP2", "C4", "F4", "Fz"}, 74.41},
      {"Topic et al. (ReliefF)", {"FP1", "AF3", "F3", "F7", "T7", "O1", "OZ", "FP2", "F8", "P8"}, 90.76},
      {"Topic et al. (NCA)", {"FP1", "AF3", "F7", "T7", "CP5", "P7", "FP2", "AF4", "FC6", "T8"}, 90.76},
      {"Msonda et al. (Mean Squared Error)", {"CP6", "F3", "F8", "Fp1", "O2", "P7", "T7", "T8"}, 90.0},
      {"All 32 DEAP electrodes (Wang et al. baseline)",
       {"Fp1", "AF3", "F3", "F7", "FC5", "FC1", "C3", "T7", "CP5", "CP1", "P3", "P7", "PO3", "O1", "Oz", "Pz",
        "Fp2", "AF4", "Fz", "F4", "F8", "FC6", "FC2", "Cz", "C4", "T8", "CP6", "CP2", "P4", "P8", "PO4", "O2"},
       75.16},
  }};
  return rows;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

void check_unique(const ElectrodeSet& set) {
  for (std::size_t i = 0; i < set.electrodes.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (iequals(set.electrodes[i], set.electrodes[j])) {
        throw MontageError(set.electrodes[i], "listed twice in set " + set.id);
      }
    }
  }
}

}  // namespace

ElectrodeSet lobe_set(Lobe lobe) {
  ElectrodeSet set;
  set.id = std::string(lobe_name(lobe));
  for (auto name : lobe_members(lobe)) set.electrodes.emplace_back(name);
  set.provenance = std::string(lobe_name(lobe)) + " lobe";
  return set;
}

ElectrodeSet lobe_set(std::string_view lobe) {
  auto l = parse_lobe(lobe);
  if (!l) throw LobeError("unknown lobe '" + std::string(lobe) + "'");
  return lobe_set(*l);
}

ElectrodeSet literature_set(int n) {
  if (n < 1 || n > kLiteratureSetCount) throw SetIdError("literature set number " + std::to_string(n) + " not in 1..9");
  const auto& row = literature_rows()[static_cast<std::size_t>(n - 1)];
  char id[8];
  std::snprintf(id, sizeof id, "set%02d", n);
  return ElectrodeSet{id, row.electrodes, row.provenance, row.prior_accuracy};
}

std::vector<ElectrodeSet> literature_sets() {
  std::vector<ElectrodeSet> out;
  for (int n = 1; n <= kLiteratureSetCount; ++n) out.push_back(literature_set(n));
  return out;
}

std::vector<ElectrodeSet> lobe_sets() {
  std::vector<ElectrodeSet> out;
  for (Lobe l : kAllLobes) out.push_back(lobe_set(l));
  return out;
}

ElectrodeSet custom_set(std::vector<std::string> electrodes, std::string id) {
  if (electrodes.empty()) throw SetIdError("custom set is empty");
  ElectrodeSet set{std::move(id), std::move(electrodes), "user-defined", std::nullopt};
  for (const auto& e : set.electrodes) {
    if (!find_electrode(e)) throw MontageError(e, "unknown electrode");
  }
  check_unique(set);
  return set;
}

std::vector<std::size_t> resolve_indices(const ElectrodeSet& set, std::span<const std::string> channels) {
  check_unique(set);
  std::vector<std::size_t> out;
  out.reserve(set.size());
  for (const auto& name : set.electrodes) {
    auto it = std::find_if(channels.begin(), channels.end(), [&](const std::string& c) { return iequals(c, name); });
    if (it == channels.end()) throw MontageError(name, "not present in montage");
    out.push_back(static_cast<std::size_t>(it - channels.begin()));
  }
  return out;
}

std::vector<std::size_t> resolve_indices(const ElectrodeSet& set) {
  static const std::vector<std::string> full(geneva_order().begin(), geneva_order().end());
  return resolve_indices(set, full);
}

std::vector<std::string> canonical_names(const ElectrodeSet& set) {
  std::vector<std::string> out;
  for (const auto& name : set.electrodes) {
    auto e = find_electrode(name);
    if (!e) throw MontageError(name, "unknown electrode");
    out.emplace_back(e->name);
  }
  return out;
}

std::vector<ElectrodeSet> parse_selector(std::string_view selector) {
  const std::string sel = trim(selector);
  if (sel.empty()) throw SetIdError("empty electrode-set selector");
  if (lower(sel).rfind("custom:", 0) == 0) return {custom_set(split(sel.substr(7), ','))};

  std::vector<ElectrodeSet> out;
  for (const auto& tok : split(sel, ',')) {
    const std::string t = lower(tok);
    if (t == "all") {
      auto all = literature_sets();
      out.insert(out.end(), all.begin(), all.end());
    } else if (t == "lobes") {
      auto all = lobe_sets();
      out.insert(out.end(), all.begin(), all.end());
    } else if (t.rfind("lobe:", 0) == 0) {
      out.push_back(lobe_set(std::string_view(tok).substr(5)));
    } else if (t.rfind("set", 0) == 0 && t.size() > 3 &&
               std::all_of(t.begin() + 3, t.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      out.push_back(literature_set(std::stoi(t.substr(3))));
    } else {
      throw SetIdError("unrecognized electrode-set selector '" + tok + "'");
    }
  }
  return out;
}

nlohmann::ordered_json to_json(const ElectrodeSet& set) {
  nlohmann::ordered_json j;
  j["id"] = set.id;
  j["electrodes"] = set.electrodes;
  j["provenance"] = set.provenance;
  j["prior_accuracy"] = set.prior_accuracy ? nlohmann::ordered_json(*set.prior_accuracy) : nlohmann::ordered_json();
  return j;
}

ElectrodeSet electrode_set_from_json(const nlohmann::json& j) {
  ElectrodeSet set;
  set.id = j.at("id").get<std::string>();
  set.electrodes = j.at("electrodes").get<std::vector<std::string>>();
  set.provenance = j.value("provenance", std::string{});
  if (j.contains("prior_accuracy") && !j["prior_accuracy"].is_null()) set.prior_accuracy = j["prior_accuracy"].get<double>();
  return set;
}

}  // namespace neurobands
