#pragma once

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "entsim/csv.hpp"
#include "entsim/similarity.hpp"

namespace entsim {

struct ReportSummary {
  std::size_t total_pairs = 0;
  std::size_t pairs_with_out_of_layer = 0;
  std::size_t undefined_risk_pairs = 0;

  friend bool operator==(const ReportSummary&, const ReportSummary&) = default;
};

/// Records sorted by pair_id together with counts derived from them.
class Report {
 public:
  explicit Report(std::vector<ComparisonRecord> records) : records_(std::move(records)) {
    std::sort(records_.begin(), records_.end(),
              [](const auto& a, const auto& b) { return a.pair_id < b.pair_id; });
    summary_.total_pairs = records_.size();
    for (const auto& r : records_) {
      if (r.out_of_layer_real + r.out_of_layer_synthetic > 0) ++summary_.pairs_with_out_of_layer;
      if (!r.risk_deviation) ++summary_.undefined_risk_pairs;
    }
  }

  const std::vector<ComparisonRecord>& records() const { return records_; }
  const ReportSummary& summary() const { return summary_; }

 private:
  std::vector<ComparisonRecord> records_;
  ReportSummary summary_;
};

enum class ReportFormat { csv, jsonl };

/// `body` is the report document. For CSV the summary goes to a separate
/// document in `summary`; for JSONL it is the final line of `body` and
/// `summary` stays empty.
struct EmittedReport {
  std::string body;
  std::string summary;
};

inline constexpr std::string_view kReportCsvHeader =
    "pair_id,hausdorff_km,entailment_similarity,risk_real,risk_synthetic,"
    "risk_deviation,out_of_layer_real,out_of_layer_synthetic";

namespace detail {

inline std::string csv_optional(const std::optional<double>& v) {
  return v ? csv::format_double(*v) : std::string();
}

inline nlohmann::ordered_json json_optional(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

inline nlohmann::ordered_json summary_json(const ReportSummary& s) {
  nlohmann::ordered_json j;
  j["total_pairs"] = s.total_pairs;
  j["pairs_with_out_of_layer"] = s.pairs_with_out_of_layer;
  j["undefined_risk_pairs"] = s.undefined_risk_pairs;
  return j;
}

}  // namespace detail

inline EmittedReport emit_report(const Report& report, ReportFormat format) {
  EmittedReport out;
  std::ostringstream body;
  const auto& s = report.summary();
  if (format == ReportFormat::csv) {
    body << kReportCsvHeader << '\n';
    for (const auto& r : report.records()) {
      body << csv::quote_if_needed(r.pair_id) << ',' << csv::format_double(r.hausdorff_km)
           << ',' << detail::csv_optional(r.entailment_similarity) << ','
           << detail::csv_optional(r.risk_real) << ','
           << detail::csv_optional(r.risk_synthetic) << ','
           << detail::csv_optional(r.risk_deviation) << ',' << r.out_of_layer_real << ','
           << r.out_of_layer_synthetic << '\n';
    }
    out.summary = "total_pairs,pairs_with_out_of_layer,undefined_risk_pairs\n" +
                  std::to_string(s.total_pairs) + ',' +
                  std::to_string(s.pairs_with_out_of_layer) + ',' +
                  std::to_string(s.undefined_risk_pairs) + '\n';
  } else {
    for (const auto& r : report.records()) {
      nlohmann::ordered_json j;
      j["pair_id"] = r.pair_id;
      j["hausdorff_km"] = r.hausdorff_km;
      j["entailment_similarity"] = detail::json_optional(r.entailment_similarity);
      j["risk_real"] = detail::json_optional(r.risk_real);
      j["risk_synthetic"] = detail::json_optional(r.risk_synthetic);
      j["risk_deviation"] = detail::json_optional(r.risk_deviation);
      j["out_of_layer_real"] = r.out_of_layer_real;
      j["out_of_layer_synthetic"] = r.out_of_layer_synthetic;
      if (!r.diagnostics.empty()) j["diagnostics"] = r.diagnostics;
      body << j.dump() << '\n';
    }
    nlohmann::ordered_json tail;
    tail["summary"] = detail::summary_json(s);
    body << tail.dump() << '\n';
  }
  out.body = body.str();
  return out;
}

}  // namespace entsim
