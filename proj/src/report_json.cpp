#include "outerinv/report_json.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <sstream>

namespace outerinv {

namespace {

using nlohmann::json;

json finite_or_null(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

std::string utc_now_iso8601() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

}  // namespace

json thresholds_to_json(const Thresholds& t) {
  json obj = json::object();
  if (t.delta_t) obj["delta_T"] = *t.delta_t;
  if (t.delta_s) obj["delta_S"] = *t.delta_s;
  if (t.e_product) obj["e_product"] = *t.e_product;
  return obj;
}

json hypothesis_to_json(const HypothesisCheck& h) {
  return json{{"name", hypothesis_name_str(h.name)},
              {"kappa", h.kappa},
              {"delta_T", h.delta_t},
              {"delta_S", h.delta_s},
              {"e_product", h.e_product},
              {"thresholds", thresholds_to_json(h.thresholds)},
              {"satisfied", h.satisfied}};
}

json bound_report_to_json(const BoundReport& r) {
  return json{{"name", r.name},
              {"kappa", r.hypothesis.kappa},
              {"delta_T", r.hypothesis.delta_t},
              {"delta_S", r.hypothesis.delta_s},
              {"e_product", r.hypothesis.e_product},
              {"thresholds", thresholds_to_json(r.hypothesis.thresholds)},
              {"lhs", r.lhs},
              {"rhs", finite_or_null(r.rhs)},
              {"ratio", finite_or_null(r.ratio)},
              {"hypothesis_ok", r.hypothesis.satisfied},
              {"satisfied", r.satisfied}};
}

json trial_config_to_json(const TrialConfig& c) {
  return json{{"seed", c.seed},
              {"trials", c.trials},
              {"n_x", c.n_x},
              {"n_y", c.n_y},
              {"t", c.t},
              {"gap_budget_t", c.gap_budget_t},
              {"gap_budget_s", c.gap_budget_s},
              {"e_budget", c.e_budget},
              {"independent_s", c.independent_s},
              {"tolerances",
               json{{"formula_rel", c.tolerances.formula_rel},
                    {"bound_slack_rel", c.tolerances.bound_slack_rel},
                    {"bound_slack_abs", c.tolerances.bound_slack_abs}}}};
}

json trial_record_to_json(const TrialRecord& r) {
  json bounds = json::array();
  for (const auto& bound : r.bounds) {
    bounds.push_back(bound_report_to_json(bound));
  }
  return json{{"trial_id", r.trial_id},
              {"kappa", r.kappa},
              {"delta_T", r.delta_t},
              {"delta_S", r.delta_s},
              {"e_product", r.e_product},
              {"nullspace_disjoint_tprime", r.nullspace_disjoint_tprime},
              {"formula_rel_errors", json(r.formula_rel_errors)},
              {"bounds", std::move(bounds)},
              {"pass", r.pass},
              {"error", r.error}};
}

json suite_aggregates_to_json(const SuiteAggregates& a) {
  return json{{"max_rel_error", json(a.max_rel_error)},
              {"max_bound_ratio", json(a.max_bound_ratio)},
              {"hypothesis_satisfied", json(a.hypothesis_satisfied)},
              {"hypothesis_total", json(a.hypothesis_total)},
              {"kappa_min", a.kappa_min},
              {"kappa_max", a.kappa_max},
              {"kappa_mean", a.kappa_mean},
              {"failures", a.failures}};
}

json suite_report_to_json(const SuiteReport& report, bool include_timestamp) {
  json trials = json::array();
  for (const auto& record : report.records) {
    trials.push_back(trial_record_to_json(record));
  }
  json doc{{"config", trial_config_to_json(report.config)},
           {"trials", std::move(trials)},
           {"aggregates", suite_aggregates_to_json(report.aggregates)}};
  if (include_timestamp) doc["timestamp"] = utc_now_iso8601();
  return doc;
}

std::string suite_report_to_csv(const SuiteReport& report) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "trial_id,name,kappa,delta_T,delta_S,e_product,threshold_delta_T,"
        "threshold_delta_S,threshold_e_product,lhs,rhs,ratio,hypothesis_ok,"
        "satisfied\n";
  const auto cell = [&os](const std::optional<double>& v) {
    if (v && std::isfinite(*v)) os << *v;
  };
  for (const auto& record : report.records) {
    for (const auto& bound : record.bounds) {
      os << record.trial_id << ',' << csv_quote(bound.name) << ','
         << bound.hypothesis.kappa << ',' << bound.hypothesis.delta_t << ','
         << bound.hypothesis.delta_s << ',' << bound.hypothesis.e_product
         << ',';
      cell(bound.hypothesis.thresholds.delta_t);
      os << ',';
      cell(bound.hypothesis.thresholds.delta_s);
      os << ',';
      cell(bound.hypothesis.thresholds.e_product);
      os << ',' << bound.lhs << ',';
      cell(bound.rhs);
      os << ',';
      cell(bound.ratio);
      os << ',' << (bound.hypothesis.satisfied ? "true" : "false") << ','
         << (bound.satisfied ? "true" : "false") << '\n';
    }
  }
  return os.str();
}

}  // namespace outerinv
