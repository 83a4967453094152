#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "firenze/marker_matrix.hpp"
#include "firenze/score_table.hpp"

namespace firenze {

// What to do with marker rows whose sample id never appears in the score
// table.  strict treats them as an input error; abstain drops them and
// reports how many were dropped.
enum class UnmatchedPolicy {
    strict,
    abstain,
};

// Loads a score file: columns sample_id, score_ref, score_test.  CSV or
// JSONL, decided by extension (.jsonl/.ndjson) with a content sniff as
// fallback.  Errors carry file and line context.
ScoreTable load_score_file(const std::filesystem::path& path);

// Loads a marker file: columns sample_id, marker, verdict in {-1,0,1}.
// Marker names and sample ids are canonicalised to sorted order so the
// matrix (and everything derived from it) is independent of row order.
MarkerMatrix load_marker_file(const std::filesystem::path& path);

// Aligns a loaded marker matrix with the score table's sample universe:
// score samples missing from the matrix become all-abstain rows; matrix
// samples missing from the table are an error (strict) or are dropped with
// the count reported through *dropped (abstain).
MarkerMatrix reconcile(const MarkerMatrix& markers, const ScoreTable& scores,
                       UnmatchedPolicy policy, std::size_t* dropped = nullptr);

// Flat key=value configuration file ('#' comments and blank lines allowed).
// Duplicate keys are an error.
std::map<std::string, std::string> parse_kv_config(const std::filesystem::path& path);

// Writes content to a temporary sibling then renames it over the target, so
// a crash can not leave a half-written file behind.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

} // namespace firenze
