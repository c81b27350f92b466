#pragma once

#include <json.hpp>

#include "outerinv/harness.hpp"

namespace outerinv {

// JSON field names below are a stable interface consumed by the CLI and
// the Python bindings; changing them breaks downstream report parsers.

nlohmann::json thresholds_to_json(const Thresholds& t);
nlohmann::json hypothesis_to_json(const HypothesisCheck& h);
nlohmann::json bound_report_to_json(const BoundReport& r);
nlohmann::json trial_config_to_json(const TrialConfig& c);
nlohmann::json trial_record_to_json(const TrialRecord& r);
nlohmann::json suite_aggregates_to_json(const SuiteAggregates& a);
nlohmann::json suite_report_to_json(const SuiteReport& report,
                                    bool include_timestamp = true);

/// One CSV row per BoundReport, with a header line.
std::string suite_report_to_csv(const SuiteReport& report);

}  // namespace outerinv
