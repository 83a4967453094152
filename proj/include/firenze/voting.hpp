#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace firenze {

// Outcome probabilities of a majority vote among independent markers that
// each vote correctly with their own accuracy.  Ties can only occur for an
// even number of voters.  The three fields sum to 1.
struct VoteOutcome {
    double p_correct = 0.0;
    double p_tie = 0.0;
    double p_wrong = 0.0;
};

// k independent voters, each correct with probability alpha.
// p_correct is the binomial upper tail P(X > k/2), computed by a
// multiplicative term recurrence anchored in log space, so it stays stable
// out to k in the tens of thousands without factorials.
VoteOutcome majority_accuracy(std::size_t k, double alpha);

// Independent voters with individual accuracies.  The number-correct
// distribution is Poisson binomial, built by iterative convolution.
VoteOutcome majority_accuracy_hetero(std::span<const double> alphas);

// P(number correct = j) for j = 0..k under individual accuracies; the
// distribution behind majority_accuracy_hetero.
std::vector<double> poisson_binomial_pmf(std::span<const double> alphas);

// Probability that at least one marker votes when marker j votes with
// probability beta_j, independently: 1 - prod(1 - beta_j).
double combined_coverage(std::span<const double> betas);

struct CurvePoint {
    std::size_t k = 0;
    double alpha = 0.0;
    double p_correct = 0.0;
};

// p_correct over the full (k, alpha) product grid, k-major order.
std::vector<CurvePoint> accuracy_curves(std::span<const std::size_t> ks,
                                        std::span<const double> alphas);

struct MarginalRow {
    double alpha_new = 0.0;
    double p_with = 0.0;    // ensemble accuracy with the candidate added
    double p_without = 0.0; // ensemble accuracy of the base set alone
};

// Effect of adding one candidate marker (per candidate accuracy) to an
// existing ensemble.
std::vector<MarginalRow> marginal_marker_impact(std::span<const double> base_alphas,
                                                std::span<const double> candidate_alphas);

} // namespace firenze
