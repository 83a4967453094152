#include "firenze/io.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "firenze/errors.hpp"

namespace firenze {

namespace {

using nlohmann::json;

// The combined-score row label in reports; a real marker may not shadow it.
constexpr const char* kCombinedLabel = "CombinedMarkerScore";

std::string loc(const std::filesystem::path& path, std::size_t line) {
    return path.string() + ":" + std::to_string(line);
}

// Splits one CSV record.  Commas separate fields; double quotes protect
// embedded commas with "" as the escaped quote.  A trailing carriage return
// (CRLF input) is dropped.
std::vector<std::string> split_csv_line(std::string_view line,
                                        const std::filesystem::path& path, std::size_t lineno) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            if (!cur.empty())
                throw format_error(loc(path, lineno) + ": stray quote inside unquoted field");
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (quoted)
        throw format_error(loc(path, lineno) + ": unterminated quoted field");
    fields.push_back(std::move(cur));
    return fields;
}

double parse_double(const std::string& s, const std::filesystem::path& path,
                    std::size_t lineno, const char* what) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0' || errno == ERANGE)
        throw format_error(loc(path, lineno) + ": cannot parse " + what + " value '" + s + "'");
    return v;
}

long long parse_int(const std::string& s, const std::filesystem::path& path,
                    std::size_t lineno, const char* what) {
    errno = 0;
    char* end = nullptr;
    const long long v = std::strtoll(s.c_str(), &end, 10);
    if (end == s.c_str() || *end != '\0' || errno == ERANGE)
        throw format_error(loc(path, lineno) + ": cannot parse " + what + " value '" + s + "'");
    return v;
}

bool looks_like_jsonl(const std::filesystem::path& path, const std::string& content) {
    const auto ext = path.extension().string();
    if (ext == ".jsonl" || ext == ".ndjson") return true;
    if (ext == ".csv") return false;
    const auto pos = content.find_first_not_of(" \t\r\n");
    return pos != std::string::npos && content[pos] == '{';
}

// Streams over lines, calling row_fn(line, lineno) for each non-empty line.
template <typename Fn>
void for_each_line(const std::string& content, Fn&& row_fn) {
    std::size_t lineno = 0;
    std::size_t start = 0;
    while (start <= content.size()) {
        std::size_t end = content.find('\n', start);
        if (end == std::string::npos) end = content.size();
        ++lineno;
        std::string_view line(content.data() + start, end - start);
        if (!line.empty() && !(line.size() == 1 && line[0] == '\r'))
            row_fn(line, lineno);
        start = end + 1;
        if (end == content.size()) break;
    }
}

json parse_json_row(std::string_view line, const std::filesystem::path& path,
                    std::size_t lineno) {
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object())
        throw format_error(loc(path, lineno) + ": not a JSON object");
    return j;
}

const json& json_field(const json& j, const char* key, const std::filesystem::path& path,
                       std::size_t lineno) {
    auto it = j.find(key);
    if (it == j.end())
        throw format_error(loc(path, lineno) + ": missing field '" + key + "'");
    return *it;
}

std::string json_string_field(const json& j, const char* key,
                              const std::filesystem::path& path, std::size_t lineno) {
    const json& f = json_field(j, key, path, lineno);
    if (!f.is_string())
        throw format_error(loc(path, lineno) + ": field '" + key + "' must be a string");
    return f.get<std::string>();
}

double json_number_field(const json& j, const char* key, const std::filesystem::path& path,
                         std::size_t lineno) {
    const json& f = json_field(j, key, path, lineno);
    if (!f.is_number())
        throw format_error(loc(path, lineno) + ": field '" + key + "' must be a number");
    return f.get<double>();
}

struct CsvHeader {
    std::unordered_map<std::string, std::size_t> columns;

    std::size_t require(const char* name, const std::filesystem::path& path) const {
        auto it = columns.find(name);
        if (it == columns.end())
            throw format_error(path.string() + ":1: missing required column '" +
                               std::string(name) + "'");
        return it->second;
    }
};

CsvHeader parse_header(const std::vector<std::string>& fields,
                       const std::filesystem::path& path) {
    CsvHeader h;
    for (std::size_t i = 0; i < fields.size(); ++i)
        if (!h.columns.emplace(fields[i], i).second)
            throw format_error(path.string() + ":1: duplicate column '" + fields[i] + "'");
    return h;
}

} // namespace

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw format_error("cannot open file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return std::move(ss).str();
}

ScoreTable load_score_file(const std::filesystem::path& path) {
    const std::string content = read_file(path);
    std::vector<ScoreRow> rows;

    if (looks_like_jsonl(path, content)) {
        for_each_line(content, [&](std::string_view line, std::size_t lineno) {
            const json j = parse_json_row(line, path, lineno);
            rows.push_back({json_string_field(j, "sample_id", path, lineno),
                            json_number_field(j, "score_ref", path, lineno),
                            json_number_field(j, "score_test", path, lineno)});
        });
    } else {
        bool have_header = false;
        std::size_t id_col = 0, ref_col = 0, test_col = 0, width = 0;
        for_each_line(content, [&](std::string_view line, std::size_t lineno) {
            auto fields = split_csv_line(line, path, lineno);
            if (!have_header) {
                const CsvHeader h = parse_header(fields, path);
                id_col = h.require("sample_id", path);
                ref_col = h.require("score_ref", path);
                test_col = h.require("score_test", path);
                width = fields.size();
                have_header = true;
                return;
            }
            if (fields.size() != width)
                throw format_error(loc(path, lineno) + ": expected " + std::to_string(width) +
                                   " fields, got " + std::to_string(fields.size()));
            rows.push_back({fields[id_col],
                            parse_double(fields[ref_col], path, lineno, "score_ref"),
                            parse_double(fields[test_col], path, lineno, "score_test")});
        });
        if (!have_header)
            throw format_error(path.string() + ": empty score file (header row required)");
    }
    if (rows.empty())
        throw format_error(path.string() + ": score file has no data rows");
    return ScoreTable::from_rows(std::move(rows));
}

MarkerMatrix load_marker_file(const std::filesystem::path& path) {
    const std::string content = read_file(path);

    struct Triplet {
        std::string sample, marker;
        Verdict v;
    };
    std::vector<Triplet> triplets;
    std::unordered_map<std::string, std::size_t> seen; // (sample, marker) -> first line

    auto add = [&](std::string sample, std::string marker, long long verdict,
                   std::size_t lineno) {
        if (marker == kCombinedLabel)
            throw format_error(loc(path, lineno) + ": marker name '" + marker +
                               "' is reserved for the combined score row");
        Verdict v;
        try {
            v = verdict_from_int(verdict);
        } catch (const validation_error& e) {
            throw format_error(loc(path, lineno) + ": " + e.what());
        }
        std::string key = sample + '\x1f' + marker;
        auto [it, inserted] = seen.emplace(std::move(key), lineno);
        if (!inserted)
            throw format_error(loc(path, lineno) + ": duplicate (sample, marker) pair ('" +
                               sample + "', '" + marker + "'), first seen at line " +
                               std::to_string(it->second));
        triplets.push_back({std::move(sample), std::move(marker), v});
    };

    if (looks_like_jsonl(path, content)) {
        for_each_line(content, [&](std::string_view line, std::size_t lineno) {
            const json j = parse_json_row(line, path, lineno);
            const json& vf = json_field(j, "verdict", path, lineno);
            if (!vf.is_number_integer())
                throw format_error(loc(path, lineno) + ": field 'verdict' must be an integer");
            add(json_string_field(j, "sample_id", path, lineno),
                json_string_field(j, "marker", path, lineno), vf.get<long long>(), lineno);
        });
    } else {
        bool have_header = false;
        std::size_t id_col = 0, marker_col = 0, verdict_col = 0, width = 0;
        for_each_line(content, [&](std::string_view line, std::size_t lineno) {
            auto fields = split_csv_line(line, path, lineno);
            if (!have_header) {
                const CsvHeader h = parse_header(fields, path);
                id_col = h.require("sample_id", path);
                marker_col = h.require("marker", path);
                verdict_col = h.require("verdict", path);
                width = fields.size();
                have_header = true;
                return;
            }
            if (fields.size() != width)
                throw format_error(loc(path, lineno) + ": expected " + std::to_string(width) +
                                   " fields, got " + std::to_string(fields.size()));
            add(fields[id_col], fields[marker_col],
                parse_int(fields[verdict_col], path, lineno, "verdict"), lineno);
        });
        if (!have_header)
            throw format_error(path.string() + ": empty marker file (header row required)");
    }

    // Canonical order: registering samples and markers sorted makes the
    // matrix a pure function of the file's row set, not its row order.
    std::vector<std::string> ids, names;
    for (const auto& t : triplets) {
        ids.push_back(t.sample);
        names.push_back(t.marker);
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());

    MarkerMatrix::Builder b;
    for (const auto& id : ids) b.add_sample(id);
    for (const auto& name : names) b.add_marker(name);
    for (const auto& t : triplets) b.set(t.sample, t.marker, t.v);
    return b.build();
}

MarkerMatrix reconcile(const MarkerMatrix& markers, const ScoreTable& scores,
                       UnmatchedPolicy policy, std::size_t* dropped) {
    std::unordered_set<std::string> universe(scores.sample_ids().begin(),
                                             scores.sample_ids().end());
    std::size_t unmatched = 0;
    std::string witness;
    for (const auto& id : markers.sample_ids()) {
        if (!universe.count(id)) {
            ++unmatched;
            if (witness.empty()) witness = id;
        }
    }
    if (unmatched > 0 && policy == UnmatchedPolicy::strict)
        throw validation_error("marker file has " + std::to_string(unmatched) +
                               " sample(s) absent from the score table (first: '" + witness +
                               "'); rerun with the abstain policy to drop them");
    if (dropped) *dropped = unmatched;

    MarkerMatrix::Builder b;
    for (const auto& id : scores.sample_ids()) b.add_sample(id);
    for (const auto& name : markers.marker_names()) b.add_marker(name);
    for (const auto& id : markers.sample_ids()) {
        if (!universe.count(id)) continue;
        const std::size_t s = markers.sample_index(id);
        for (std::size_t m = 0; m < markers.marker_count(); ++m) {
            const Verdict v = markers.verdict_at(s, m);
            if (v != Verdict::abstain) b.set(id, markers.marker_names()[m], v);
        }
    }
    return b.build();
}

std::map<std::string, std::string> parse_kv_config(const std::filesystem::path& path) {
    const std::string content = read_file(path);
    std::map<std::string, std::string> out;
    for_each_line(content, [&](std::string_view line, std::size_t lineno) {
        std::string s(line);
        if (!s.empty() && s.back() == '\r') s.pop_back();
        const auto hash = s.find('#');
        if (hash != std::string::npos) s.erase(hash);
        const auto strip = [](std::string& v) {
            const auto b = v.find_first_not_of(" \t");
            const auto e = v.find_last_not_of(" \t");
            v = b == std::string::npos ? std::string() : v.substr(b, e - b + 1);
        };
        strip(s);
        if (s.empty()) return;
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw format_error(loc(path, lineno) + ": expected key=value");
        std::string key = s.substr(0, eq);
        std::string value = s.substr(eq + 1);
        strip(key);
        strip(value);
        if (key.empty())
            throw format_error(loc(path, lineno) + ": empty key");
        if (!out.emplace(key, value).second)
            throw format_error(loc(path, lineno) + ": duplicate key '" + key + "'");
    });
    return out;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw format_error("cannot open for writing: " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out)
            throw format_error("write failed: " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec)
        throw format_error("cannot rename " + tmp.string() + " to " + path.string() + ": " +
                           ec.message());
}

} // namespace firenze
