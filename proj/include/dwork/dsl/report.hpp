#pragma once

#include <string>

#include <json.hpp>

#include "dwork/rewrite/engine.hpp"
#include "dwork/weyl/compare.hpp"

namespace dwork::dsl {

using Json = nlohmann::ordered_json;

enum class ReportFormat { Text, Machine };

constexpr int kSchemaVersion = 1;

// Machine trees. Keys appear in a fixed order and carry no timings, so output is byte-stable.
Json report_json(const rewrite::ValidationReport& r);
Json report_json(const weyl::CohomologyReport& r);
Json report_json(const weyl::ComparisonReport& r);

std::string render_report(const rewrite::ValidationReport& r, ReportFormat format);
std::string render_report(const weyl::CohomologyReport& r, ReportFormat format);
std::string render_report(const weyl::ComparisonReport& r, ReportFormat format);

// One line: name, validity, step count, rules and shift ledger.
std::string summary_line(const rewrite::ValidationReport& r);

// Nonzero entries only: "{2:1, 3:2}".
std::string render_dims(const weyl::DimTable& dims);

}  // namespace dwork::dsl
