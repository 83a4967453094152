#include "firenze/voting.hpp"

#include <cmath>
#include <string>

#include "firenze/errors.hpp"

namespace firenze {

namespace {

void check_prob(double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0))
        throw domain_error(std::string(what) + " must lie in [0, 1], got " + std::to_string(p));
}

// Upper binomial tail P(X >= n0) for X ~ Binomial(k, alpha).  The first
// term comes from lgamma (log space, no factorial overflow); successive
// terms follow from term_{n+1} = term_n * (k-n)/(n+1) * alpha/(1-alpha).
double binomial_upper_tail(std::size_t k, std::size_t n0, double alpha) {
    if (n0 > k) return 0.0;
    if (alpha == 0.0) return n0 == 0 ? 1.0 : 0.0;
    if (alpha == 1.0) return 1.0;
    const double kd = static_cast<double>(k);
    const double nd = static_cast<double>(n0);
    double term = std::exp(std::lgamma(kd + 1.0) - std::lgamma(nd + 1.0) -
                           std::lgamma(kd - nd + 1.0) + nd * std::log(alpha) +
                           (kd - nd) * std::log1p(-alpha));
    const double ratio = alpha / (1.0 - alpha);
    long double sum = term;
    for (std::size_t n = n0; n < k; ++n) {
        term *= ratio * (static_cast<double>(k - n) / static_cast<double>(n + 1));
        sum += term;
    }
    return static_cast<double>(sum);
}

double binomial_point(std::size_t k, std::size_t n, double alpha) {
    if (alpha == 0.0) return n == 0 ? 1.0 : 0.0;
    if (alpha == 1.0) return n == k ? 1.0 : 0.0;
    const double kd = static_cast<double>(k);
    const double nd = static_cast<double>(n);
    return std::exp(std::lgamma(kd + 1.0) - std::lgamma(nd + 1.0) -
                    std::lgamma(kd - nd + 1.0) + nd * std::log(alpha) +
                    (kd - nd) * std::log1p(-alpha));
}

} // namespace

VoteOutcome majority_accuracy(std::size_t k, double alpha) {
    if (k < 1)
        throw domain_error("majority_accuracy: k must be >= 1");
    check_prob(alpha, "majority_accuracy: alpha");
    VoteOutcome out;
    const std::size_t threshold = k / 2 + 1; // smallest strict majority
    out.p_correct = binomial_upper_tail(k, threshold, alpha);
    // A wrong majority needs more than k/2 incorrect votes, which is the
    // same tail with the accuracy complemented.
    out.p_wrong = binomial_upper_tail(k, threshold, 1.0 - alpha);
    out.p_tie = (k % 2 == 0) ? binomial_point(k, k / 2, alpha) : 0.0;
    return out;
}

std::vector<double> poisson_binomial_pmf(std::span<const double> alphas) {
    if (alphas.empty())
        throw domain_error("poisson_binomial_pmf: empty accuracy list");
    for (double a : alphas) check_prob(a, "poisson_binomial_pmf: alpha");
    std::vector<long double> pmf{1.0L};
    for (double a : alphas) {
        pmf.push_back(0.0L);
        const long double al = a;
        for (std::size_t j = pmf.size() - 1; j > 0; --j)
            pmf[j] = pmf[j] * (1.0L - al) + pmf[j - 1] * al;
        pmf[0] *= (1.0L - al);
    }
    return {pmf.begin(), pmf.end()};
}

VoteOutcome majority_accuracy_hetero(std::span<const double> alphas) {
    const std::vector<double> pmf = poisson_binomial_pmf(alphas);
    const std::size_t k = alphas.size();
    VoteOutcome out;
    long double correct = 0.0L, wrong = 0.0L;
    for (std::size_t j = 0; j <= k; ++j) {
        if (2 * j > k)
            correct += pmf[j];
        else if (2 * j < k)
            wrong += pmf[j];
        else
            out.p_tie = pmf[j];
    }
    out.p_correct = static_cast<double>(correct);
    out.p_wrong = static_cast<double>(wrong);
    return out;
}

double combined_coverage(std::span<const double> betas) {
    if (betas.empty())
        throw domain_error("combined_coverage: empty coverage list");
    long double miss = 1.0L;
    for (double b : betas) {
        check_prob(b, "combined_coverage: beta");
        miss *= (1.0L - static_cast<long double>(b));
    }
    return static_cast<double>(1.0L - miss);
}

std::vector<CurvePoint> accuracy_curves(std::span<const std::size_t> ks,
                                        std::span<const double> alphas) {
    if (ks.empty() || alphas.empty())
        throw domain_error("accuracy_curves: empty grid axis");
    std::vector<CurvePoint> out;
    out.reserve(ks.size() * alphas.size());
    for (std::size_t k : ks)
        for (double a : alphas)
            out.push_back({k, a, majority_accuracy(k, a).p_correct});
    return out;
}

std::vector<MarginalRow> marginal_marker_impact(std::span<const double> base_alphas,
                                                std::span<const double> candidate_alphas) {
    if (candidate_alphas.empty())
        throw domain_error("marginal_marker_impact: no candidate accuracies");
    const double p_without = majority_accuracy_hetero(base_alphas).p_correct;
    std::vector<double> extended(base_alphas.begin(), base_alphas.end());
    std::vector<MarginalRow> out;
    out.reserve(candidate_alphas.size());
    for (double a : candidate_alphas) {
        extended.push_back(a);
        const double p_with = majority_accuracy_hetero(extended).p_correct;
        extended.pop_back();
        out.push_back({a, p_with, p_without});
    }
    return out;
}

} // namespace firenze
