#include "firenze/markers.hpp"

#include "firenze/errors.hpp"

namespace firenze {

Verdict combined_score_at(const MarkerMatrix& m, std::size_t sample_idx) {
    return sign_verdict(m.verdict_sum(sample_idx));
}

Verdict combined_score(const MarkerMatrix& m, const std::string& sample_id) {
    return combined_score_at(m, m.sample_index(sample_id));
}

std::vector<double> combined_score_values(const MarkerMatrix& m,
                                          std::span<const std::string> samples,
                                          Aggregation agg) {
    std::vector<double> out;
    out.reserve(samples.size());
    for (const auto& id : samples) {
        std::size_t idx = m.sample_index(id);
        int sum = m.verdict_sum(idx);
        if (agg == Aggregation::majority_vote)
            out.push_back(static_cast<double>(verdict_value(sign_verdict(sum))));
        else
            out.push_back(static_cast<double>(sum));
    }
    return out;
}

std::vector<double> marker_values(const MarkerMatrix& m,
                                  std::span<const std::string> samples,
                                  std::size_t marker_idx) {
    std::vector<double> out;
    out.reserve(samples.size());
    for (const auto& id : samples)
        out.push_back(static_cast<double>(verdict_value(m.verdict_at(m.sample_index(id), marker_idx))));
    return out;
}

namespace {

double mean_of(const std::vector<double>& values) {
    long double acc = 0.0L;
    for (double v : values) acc += v;
    return static_cast<double>(acc / static_cast<long double>(values.size()));
}

} // namespace

double average_marker_score(const MarkerMatrix& m, std::span<const std::string> samples) {
    if (samples.empty())
        throw domain_error("average_marker_score: empty sample set");
    return mean_of(combined_score_values(m, samples));
}

double per_marker_average(const MarkerMatrix& m, std::span<const std::string> samples,
                          const std::string& marker) {
    if (samples.empty())
        throw domain_error("per_marker_average: empty sample set");
    return mean_of(marker_values(m, samples, m.marker_index(marker)));
}

} // namespace firenze
