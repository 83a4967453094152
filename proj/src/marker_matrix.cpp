#include "firenze/marker_matrix.hpp"

#include <algorithm>

#include "firenze/errors.hpp"

namespace firenze {

std::size_t MarkerMatrix::sample_index(const std::string& id) const {
    auto it = sample_index_.find(id);
    if (it == sample_index_.end())
        throw lookup_error("unknown sample id: '" + id + "'");
    return it->second;
}

std::size_t MarkerMatrix::marker_index(const std::string& name) const {
    auto it = marker_index_.find(name);
    if (it == marker_index_.end())
        throw lookup_error("unknown marker name: '" + name + "'");
    return it->second;
}

Verdict MarkerMatrix::verdict_at(std::size_t sample_idx, std::size_t marker_idx) const {
    if (sample_idx >= rows_.size())
        throw lookup_error("sample index out of range: " + std::to_string(sample_idx));
    if (marker_idx >= marker_names_.size())
        throw lookup_error("marker index out of range: " + std::to_string(marker_idx));
    const auto& row = rows_[sample_idx];
    auto it = std::lower_bound(row.begin(), row.end(),
                               std::make_pair(static_cast<std::uint32_t>(marker_idx),
                                              static_cast<std::int8_t>(-2)));
    if (it != row.end() && it->first == marker_idx)
        return static_cast<Verdict>(it->second);
    return Verdict::abstain;
}

int MarkerMatrix::verdict_sum(std::size_t sample_idx) const {
    if (sample_idx >= rows_.size())
        throw lookup_error("sample index out of range: " + std::to_string(sample_idx));
    int sum = 0;
    for (const auto& [marker, v] : rows_[sample_idx]) sum += v;
    return sum;
}

std::size_t MarkerMatrix::vote_count(std::size_t sample_idx) const {
    if (sample_idx >= rows_.size())
        throw lookup_error("sample index out of range: " + std::to_string(sample_idx));
    return rows_[sample_idx].size();
}

std::size_t MarkerMatrix::Builder::add_sample(const std::string& id) {
    auto it = m_.sample_index_.find(id);
    if (it != m_.sample_index_.end()) return it->second;
    std::size_t idx = m_.sample_ids_.size();
    m_.sample_ids_.push_back(id);
    m_.sample_index_.emplace(id, idx);
    m_.rows_.emplace_back();
    return idx;
}

std::size_t MarkerMatrix::Builder::add_marker(const std::string& name) {
    auto it = m_.marker_index_.find(name);
    if (it != m_.marker_index_.end()) return it->second;
    std::size_t idx = m_.marker_names_.size();
    m_.marker_names_.push_back(name);
    m_.marker_index_.emplace(name, idx);
    return idx;
}

void MarkerMatrix::Builder::set(const std::string& sample_id, const std::string& marker,
                                Verdict v) {
    std::size_t s = add_sample(sample_id);
    std::size_t m = add_marker(marker);
    auto& row = m_.rows_[s];
    auto key = std::make_pair(static_cast<std::uint32_t>(m), static_cast<std::int8_t>(-2));
    auto it = std::lower_bound(row.begin(), row.end(), key);
    if (it != row.end() && it->first == m)
        throw format_error("duplicate verdict for sample '" + sample_id + "', marker '" +
                           marker + "'");
    // Explicit abstains are kept until build() so a second verdict for the
    // same cell is still caught as a duplicate, then stripped: an absent
    // cell already reads as abstain and must not count as a cast vote.
    row.insert(it, std::make_pair(static_cast<std::uint32_t>(m),
                                  static_cast<std::int8_t>(verdict_value(v))));
}

MarkerMatrix MarkerMatrix::Builder::build() {
    if (built_)
        throw validation_error("MarkerMatrix::Builder::build() called twice");
    built_ = true;
    for (auto& row : m_.rows_) {
        std::erase_if(row, [](const auto& e) { return e.second == 0; });
        m_.entries_ += row.size();
    }
    return std::move(m_);
}

} // namespace firenze
