#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "firenze/verdict.hpp"

namespace firenze {

// Sparse (sample x marker) verdict matrix.  Only non-abstain verdicts are
// stored; every (sample, marker) cell that was never set reads as abstain.
// A sample with no stored verdicts at all is a legitimate all-abstain row.
//
// The matrix is immutable once built.  Sample ids and marker names keep the
// order in which the builder first saw them; loaders that need a canonical
// order sort before registering.
class MarkerMatrix {
public:
    class Builder;

    std::size_t sample_count() const noexcept { return sample_ids_.size(); }
    std::size_t marker_count() const noexcept { return marker_names_.size(); }

    const std::vector<std::string>& sample_ids() const noexcept { return sample_ids_; }
    const std::vector<std::string>& marker_names() const noexcept { return marker_names_; }

    bool has_sample(const std::string& id) const { return sample_index_.count(id) != 0; }
    bool has_marker(const std::string& name) const { return marker_index_.count(name) != 0; }

    // Index lookups throw lookup_error naming the missing id so a caller
    // (or a CLI user) can see exactly which key was wrong.
    std::size_t sample_index(const std::string& id) const;
    std::size_t marker_index(const std::string& name) const;

    // Single-cell read; absent cells are abstain.
    Verdict verdict_at(std::size_t sample_idx, std::size_t marker_idx) const;

    // Sum of all verdict values for one sample (the raw-sum aggregation).
    int verdict_sum(std::size_t sample_idx) const;

    // Number of non-abstain verdicts stored for one sample.
    std::size_t vote_count(std::size_t sample_idx) const;

    // Total number of stored (non-abstain) entries.
    std::size_t entry_count() const noexcept { return entries_; }

private:
    friend class Builder;
    MarkerMatrix() = default;

    std::vector<std::string> sample_ids_;
    std::vector<std::string> marker_names_;
    std::unordered_map<std::string, std::size_t> sample_index_;
    std::unordered_map<std::string, std::size_t> marker_index_;
    // rows_[sample] holds (marker index, verdict) pairs sorted by marker index.
    std::vector<std::vector<std::pair<std::uint32_t, std::int8_t>>> rows_;
    std::size_t entries_ = 0;
};

// Incremental construction.  add_sample/add_marker are get-or-add so rows
// from a file can register names as they appear; set() rejects a duplicate
// (sample, marker) pair because two verdicts from the same marker for the
// same sample have no meaningful combination.
class MarkerMatrix::Builder {
public:
    std::size_t add_sample(const std::string& id);
    std::size_t add_marker(const std::string& name);
    void set(const std::string& sample_id, const std::string& marker, Verdict v);
    MarkerMatrix build();

private:
    MarkerMatrix m_;
    bool built_ = false;
};

} // namespace firenze
