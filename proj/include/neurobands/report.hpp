#pragma once

#include <string>

#include <json.hpp>

#include "neurobands/harness.hpp"

namespace neurobands {

// set_id,n_electrodes,electrodes,prior_accuracy,our_accuracy
// Electrodes are space-separated; accuracies are percentages with two
// decimals; a missing prior accuracy is an empty field. LF line endings.
std::string comparison_csv(const ComparisonTable& table);

// set_id,prior_accuracy,our_accuracy (bar-chart data)
std::string bars_csv(const ComparisonTable& table);

// n_electrodes,set_id,accuracy (accuracy-vs-count curve)
std::string curve_csv(const CurveData& curve);

// Per-epoch training curve of every row: set_id,epoch,loss,accuracy
std::string history_csv(const ComparisonTable& table);

// Fixed-width table for stdout.
std::string format_table(const ComparisonTable& table);

nlohmann::ordered_json to_json(const EvalReport& report);
EvalReport eval_report_from_json(const nlohmann::json& j);

nlohmann::ordered_json to_json(const ComparisonTable& table);
ComparisonTable comparison_from_json(const nlohmann::json& j);

}  // namespace neurobands
