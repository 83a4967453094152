#pragma once

#include <span>
#include <string>
#include <vector>

#include "firenze/marker_matrix.hpp"

namespace firenze {

// How a sample's verdicts collapse to a single per-sample score.
//   majority_vote: sign of the verdict sum, ties -> 0.  This is the combined
//                  marker score used everywhere by default.
//   raw_sum:       the plain verdict sum, kept as an alternative for
//                  experimentation (it weights loud samples more).
enum class Aggregation {
    majority_vote,
    raw_sum,
};

// Combined marker score of one sample: majority vote over all its verdicts.
Verdict combined_score(const MarkerMatrix& m, const std::string& sample_id);
Verdict combined_score_at(const MarkerMatrix& m, std::size_t sample_idx);

// Per-sample scores for a set of samples, in the order given.  Abstaining
// samples contribute 0, they are not dropped.
std::vector<double> combined_score_values(const MarkerMatrix& m,
                                          std::span<const std::string> samples,
                                          Aggregation agg = Aggregation::majority_vote);

// Raw verdicts of a single marker over a set of samples, in the order given.
std::vector<double> marker_values(const MarkerMatrix& m,
                                  std::span<const std::string> samples,
                                  std::size_t marker_idx);

// Mean combined score over a non-empty set of samples.  Abstaining samples
// stay in the denominator: a region where half the markers abstain has a
// correspondingly diluted average.
double average_marker_score(const MarkerMatrix& m, std::span<const std::string> samples);

// Mean raw verdict of one marker over a non-empty set of samples.
double per_marker_average(const MarkerMatrix& m, std::span<const std::string> samples,
                          const std::string& marker);

} // namespace firenze
