#pragma once

#include <span>
#include <string>

#include "firenze/hypothesis.hpp"

namespace firenze {

enum class ReportFormat {
    table, // human-readable summary plus per-marker sections
    csv,   // one row per (test, k, marker) with the combined row last
    json,  // same rows as csv, nested by (test, k)
};

ReportFormat report_format_from_string(const std::string& s); // throws domain_error

// Deterministic decimal rendering with 10 significant digits (NaN -> "NaN",
// infinities -> "inf"/"-inf").  Both csv and json render numbers through
// this, so the two formats always carry identical numeric values.
std::string format_number(double v);

// Renders comparison results.  Rows appear in result order; within a
// result, marker rows keep matrix order and the combined row comes last
// under the label "CombinedMarkerScore".
std::string render_report(std::span<const TestResult> results, ReportFormat format);

} // namespace firenze
