#pragma once

#include <span>
#include <string>
#include <vector>

namespace firenze {

struct ScoreRow {
    std::string sample_id;
    double score_ref = 0.0;
    double score_test = 0.0;
};

// One row per sample with the two model scores under comparison.  Rows are
// stored sorted by sample id so every downstream computation is independent
// of input file order.  Construction validates: ids unique, scores finite.
class ScoreTable {
public:
    static ScoreTable from_rows(std::vector<ScoreRow> rows);

    std::size_t size() const noexcept { return ids_.size(); }
    const std::vector<std::string>& sample_ids() const noexcept { return ids_; }
    std::span<const double> ref_scores() const noexcept { return ref_; }
    std::span<const double> test_scores() const noexcept { return test_; }

private:
    ScoreTable() = default;
    std::vector<std::string> ids_;
    std::vector<double> ref_;
    std::vector<double> test_;
};

} // namespace firenze
