#include "firenze/score_table.hpp"

#include <algorithm>
#include <cmath>

#include "firenze/errors.hpp"

namespace firenze {

ScoreTable ScoreTable::from_rows(std::vector<ScoreRow> rows) {
    std::sort(rows.begin(), rows.end(),
              [](const ScoreRow& a, const ScoreRow& b) { return a.sample_id < b.sample_id; });
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (!std::isfinite(r.score_ref) || !std::isfinite(r.score_test))
            throw validation_error("non-finite score for sample '" + r.sample_id + "'");
        if (i > 0 && rows[i - 1].sample_id == r.sample_id)
            throw format_error("duplicate sample id in score table: '" + r.sample_id + "'");
    }
    ScoreTable t;
    t.ids_.reserve(rows.size());
    t.ref_.reserve(rows.size());
    t.test_.reserve(rows.size());
    for (auto& r : rows) {
        t.ids_.push_back(std::move(r.sample_id));
        t.ref_.push_back(r.score_ref);
        t.test_.push_back(r.score_test);
    }
    return t;
}

} // namespace firenze
