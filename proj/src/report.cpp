#include "neurobands/report.hpp"

#include <cstdio>

namespace neurobands {

namespace {

std::string percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", 100.0 * fraction);
  return buf;
}

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

template <typename Json>
Json optional_number(const std::optional<double>& v) {
  return v ? Json(*v) : Json();
}

std::optional<double> read_optional(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return j[key].get<double>();
}

}  // namespace

std::string comparison_csv(const ComparisonTable& table) {
  std::string out = "set_id,n_electrodes,electrodes,prior_accuracy,our_accuracy\n";
  for (const auto& r : table.rows) {
    out += r.set_id + "," + std::to_string(r.n_electrodes) + "," + join(r.electrodes, " ") + "," +
           (r.prior_accuracy ? fixed2(*r.prior_accuracy) : std::string{}) + "," + percent(r.test_accuracy) + "\n";
  }
  return out;
}

std::string bars_csv(const ComparisonTable& table) {
  std::string out = "set_id,prior_accuracy,our_accuracy\n";
  for (const auto& r : table.rows) {
    out += r.set_id + "," + (r.prior_accuracy ? fixed2(*r.prior_accuracy) : std::string{}) + "," +
           percent(r.test_accuracy) + "\n";
  }
  return out;
}

std::string curve_csv(const CurveData& curve) {
  std::string out = "n_electrodes,set_id,accuracy\n";
  for (const auto& p : curve.points) {
    out += std::to_string(p.n_electrodes) + "," + p.set_id + "," + percent(p.accuracy) + "\n";
  }
  return out;
}

std::string history_csv(const ComparisonTable& table) {
  std::string out = "set_id,epoch,loss,accuracy\n";
  char buf[96];
  for (const auto& r : table.rows) {
    for (std::size_t e = 0; e < r.train_history.epochs.size(); ++e) {
      const auto& s = r.train_history.epochs[e];
      std::snprintf(buf, sizeof buf, ",%zu,%.6f,%.6f\n", e + 1, s.loss, s.accuracy);
      out += r.set_id + buf;
    }
  }
  return out;
}

std::string format_table(const ComparisonTable& table) {
  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-10s %5s %10s %10s %10s\n", "set", "n", "prior%", "ours%", "trial%");
  out += buf;
  for (const auto& r : table.rows) {
    std::snprintf(buf, sizeof buf, "%-10s %5zu %10s %10s %10s\n", r.set_id.c_str(), r.n_electrodes,
                  r.prior_accuracy ? fixed2(*r.prior_accuracy).c_str() : "-", percent(r.test_accuracy).c_str(),
                  r.trial_accuracy ? percent(*r.trial_accuracy).c_str() : "-");
    out += buf;
  }
  return out;
}

nlohmann::ordered_json to_json(const EvalReport& r) {
  using J = nlohmann::ordered_json;
  J j;
  j["set_id"] = r.set_id;
  j["electrodes"] = r.electrodes;
  j["n_electrodes"] = r.n_electrodes;
  j["test_accuracy"] = r.test_accuracy;
  j["prior_accuracy"] = optional_number<J>(r.prior_accuracy);
  j["trial_accuracy"] = optional_number<J>(r.trial_accuracy);
  j["confusion"] = {{"tn", r.confusion.tn}, {"fp", r.confusion.fp}, {"fn", r.confusion.fn}, {"tp", r.confusion.tp}};
  j["n_train"] = r.n_train;
  j["n_test"] = r.n_test;
  auto hist = J::array();
  for (const auto& e : r.train_history.epochs) hist.push_back({{"loss", e.loss}, {"accuracy", e.accuracy}});
  j["train_history"] = std::move(hist);
  return j;
}

EvalReport eval_report_from_json(const nlohmann::json& j) {
  EvalReport r;
  r.set_id = j.at("set_id").get<std::string>();
  r.electrodes = j.at("electrodes").get<std::vector<std::string>>();
  r.n_electrodes = j.at("n_electrodes").get<std::size_t>();
  r.test_accuracy = j.at("test_accuracy").get<double>();
  r.prior_accuracy = read_optional(j, "prior_accuracy");
  r.trial_accuracy = read_optional(j, "trial_accuracy");
  const auto& c = j.at("confusion");
  r.confusion = {c.at("tn").get<std::size_t>(), c.at("fp").get<std::size_t>(), c.at("fn").get<std::size_t>(),
                 c.at("tp").get<std::size_t>()};
  r.n_train = j.at("n_train").get<std::size_t>();
  r.n_test = j.at("n_test").get<std::size_t>();
  for (const auto& e : j.at("train_history")) {
    r.train_history.epochs.push_back({e.at("loss").get<double>(), e.at("accuracy").get<double>()});
  }
  return r;
}

nlohmann::ordered_json to_json(const ComparisonTable& table) {
  nlohmann::ordered_json j;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : table.rows) j["rows"].push_back(to_json(r));
  return j;
}

ComparisonTable comparison_from_json(const nlohmann::json& j) {
  ComparisonTable t;
  for (const auto& r : j.at("rows")) t.rows.push_back(eval_report_from_json(r));
  return t;
}

}  // namespace neurobands
