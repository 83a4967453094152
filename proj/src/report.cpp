#include "firenze/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "firenze/errors.hpp"

namespace firenze {

namespace {

constexpr const char* kCombinedLabel = "CombinedMarkerScore";

const char* kind_title(RegionKind k) {
    switch (k) {
    case RegionKind::top_k: return "TopK Test";
    case RegionKind::bottom_k: return "BottomK Test";
    case RegionKind::movers: return "Movers Test";
    }
    return "?";
}

// Region-pair column labels for the human-readable table.
std::pair<const char*, const char*> side_labels(RegionKind k) {
    if (k == RegionKind::movers) return {"up-movers", "down-movers"};
    return {"reference", "test"};
}

std::string opt_number(const std::optional<double>& v) {
    return v.has_value() ? format_number(*v) : format_number(std::nan(""));
}

// Table-only presentation rule: vanishingly small p-values print as a
// bound, everything else as a plain number.
std::string p_for_table(const std::optional<double>& p) {
    if (!p.has_value()) return "NaN";
    if (*p < 1e-16) return "<1e-16";
    return format_number(*p);
}

struct FlatRow {
    const TestResult* result;
    const std::string* marker;
    const WelchResult* stats;
    TestVerdict verdict;
};

// csv/json row order: per result, marker rows first, combined last.
std::vector<FlatRow> flatten(std::span<const TestResult> results) {
    static const std::string combined_label = kCombinedLabel;
    std::vector<FlatRow> rows;
    for (const auto& tr : results) {
        for (const auto& mr : tr.per_marker)
            rows.push_back({&tr, &mr.marker, &mr.stats, mr.verdict});
        rows.push_back({&tr, &combined_label, &tr.combined, tr.combined_verdict});
    }
    return rows;
}

std::string render_csv(std::span<const TestResult> results) {
    std::ostringstream out;
    out << "test,k,marker,mean_a,mean_b,var_a,var_b,n_a,n_b,t,df,p,verdict\n";
    for (const auto& row : flatten(results)) {
        const auto& s = *row.stats;
        out << region_kind_name(row.result->kind) << ',' << row.result->k << ',' << *row.marker
            << ',' << format_number(s.mean_a) << ',' << format_number(s.mean_b) << ','
            << format_number(s.var_a) << ',' << format_number(s.var_b) << ',' << s.n_a << ','
            << s.n_b << ',' << opt_number(s.t) << ',' << opt_number(s.df) << ','
            << opt_number(s.p) << ',' << verdict_letter(row.verdict) << '\n';
    }
    return std::move(out).str();
}

// JSON numbers go through the same 10-significant-digit formatter as csv by
// re-parsing the rendered string; undefined values become null and
// infinities strings, since JSON has no literal for either.
nlohmann::json json_number(double v) {
    if (std::isnan(v)) return nullptr;
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return std::stod(format_number(v));
}

nlohmann::json json_opt(const std::optional<double>& v) {
    return v.has_value() ? json_number(*v) : nlohmann::json(nullptr);
}

std::string render_json(std::span<const TestResult> results) {
    nlohmann::ordered_json doc;
    doc["level"] = results.empty() ? 0.05 : results.front().level;
    doc["results"] = nlohmann::ordered_json::array();
    for (const auto& tr : results) {
        nlohmann::ordered_json entry;
        entry["test"] = region_kind_name(tr.kind);
        entry["k"] = tr.k;
        entry["rows"] = nlohmann::ordered_json::array();
        auto add_row = [&](const std::string& marker, const WelchResult& s, TestVerdict v) {
            nlohmann::ordered_json r;
            r["marker"] = marker;
            r["mean_a"] = json_number(s.mean_a);
            r["mean_b"] = json_number(s.mean_b);
            r["var_a"] = json_number(s.var_a);
            r["var_b"] = json_number(s.var_b);
            r["n_a"] = s.n_a;
            r["n_b"] = s.n_b;
            r["t"] = json_opt(s.t);
            r["df"] = json_opt(s.df);
            r["p"] = json_opt(s.p);
            r["verdict"] = verdict_letter(v);
            entry["rows"].push_back(std::move(r));
        };
        for (const auto& mr : tr.per_marker) add_row(mr.marker, mr.stats, mr.verdict);
        add_row(kCombinedLabel, tr.combined, tr.combined_verdict);
        doc["results"].push_back(std::move(entry));
    }
    return doc.dump(2) + "\n";
}

void render_aligned(std::ostringstream& out, const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> widths;
    for (const auto& row : rows) {
        if (widths.size() < row.size()) widths.resize(row.size(), 0);
        for (std::size_t i = 0; i < row.size(); ++i)
            widths[i] = std::max(widths[i], row[i].size());
    }
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << row[i];
            if (i + 1 < row.size())
                out << std::string(widths[i] - row[i].size() + 2, ' ');
        }
        out << '\n';
    }
}

std::string render_table(std::span<const TestResult> results) {
    std::ostringstream out;
    const double level = results.empty() ? 0.05 : results.front().level;
    out << "Comparison report (significance level " << format_number(level) << ")\n\n";

    // Summary: the combined-score verdict of every (test, k).
    std::vector<std::vector<std::string>> summary;
    summary.push_back({"Test", "K", "Avg score A", "Avg score B", "p-value", "Result"});
    for (const auto& tr : results)
        summary.push_back({kind_title(tr.kind), std::to_string(tr.k),
                           format_number(tr.combined.mean_a), format_number(tr.combined.mean_b),
                           p_for_table(tr.combined.p), verdict_letter(tr.combined_verdict)});
    render_aligned(out, summary);

    // Detail: per-marker breakdown per (test, k).
    for (const auto& tr : results) {
        const auto [label_a, label_b] = side_labels(tr.kind);
        out << '\n'
            << kind_title(tr.kind) << ", k = " << tr.k << "  (A = " << label_a
            << ", B = " << label_b << ")\n";
        std::vector<std::vector<std::string>> rows;
        rows.push_back({"Marker", "Avg score A", "Avg score B", "p-value", "Result"});
        for (const auto& mr : tr.per_marker)
            rows.push_back({mr.marker, format_number(mr.stats.mean_a),
                            format_number(mr.stats.mean_b), p_for_table(mr.stats.p),
                            verdict_letter(mr.verdict)});
        rows.push_back({kCombinedLabel, format_number(tr.combined.mean_a),
                        format_number(tr.combined.mean_b), p_for_table(tr.combined.p),
                        verdict_letter(tr.combined_verdict)});
        render_aligned(out, rows);
    }
    return std::move(out).str();
}

} // namespace

ReportFormat report_format_from_string(const std::string& s) {
    if (s == "table") return ReportFormat::table;
    if (s == "csv") return ReportFormat::csv;
    if (s == "json") return ReportFormat::json;
    throw domain_error("unknown report format '" + s + "' (expected table, csv or json)");
}

std::string format_number(double v) {
    if (std::isnan(v)) return "NaN";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

std::string render_report(std::span<const TestResult> results, ReportFormat format) {
    switch (format) {
    case ReportFormat::table: return render_table(results);
    case ReportFormat::csv: return render_csv(results);
    case ReportFormat::json: return render_json(results);
    }
    throw domain_error("render_report: invalid format");
}

} // namespace firenze
