#include "firenze/hypothesis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "firenze/errors.hpp"
#include "firenze/stats.hpp"

namespace firenze {

namespace {

struct Moments {
    double mean = 0.0;
    double var = 0.0; // sample variance, n-1 denominator; 0 when n == 1
};

Moments moments_of(std::span<const double> xs, const char* side) {
    if (xs.empty())
        throw domain_error(std::string("welch_test: empty value list ") + side);
    long double sum = 0.0L;
    for (double x : xs) {
        if (!std::isfinite(x))
            throw validation_error(std::string("welch_test: non-finite value in list ") + side);
        sum += x;
    }
    const long double mean = sum / static_cast<long double>(xs.size());
    Moments m;
    m.mean = static_cast<double>(mean);
    if (xs.size() > 1) {
        long double ss = 0.0L;
        for (double x : xs) {
            const long double d = static_cast<long double>(x) - mean;
            ss += d * d;
        }
        m.var = static_cast<double>(ss / static_cast<long double>(xs.size() - 1));
    }
    return m;
}

} // namespace

WelchResult welch_test(std::span<const double> a, std::span<const double> b) {
    const Moments ma = moments_of(a, "a");
    const Moments mb = moments_of(b, "b");

    WelchResult r;
    r.mean_a = ma.mean;
    r.mean_b = mb.mean;
    r.var_a = ma.var;
    r.var_b = mb.var;
    r.n_a = a.size();
    r.n_b = b.size();

    const double wa = ma.var / static_cast<double>(a.size());
    const double wb = mb.var / static_cast<double>(b.size());
    const double se2 = wa + wb;

    if (se2 == 0.0) {
        // Both variances zero: every value in each list is identical.
        if (ma.mean == mb.mean)
            return r; // no information at all; t, df, p stay empty
        r.t = ma.mean > mb.mean ? std::numeric_limits<double>::infinity()
                                : -std::numeric_limits<double>::infinity();
        r.p = 0.0; // perfect separation
        return r;
    }

    r.t = (ma.mean - mb.mean) / std::sqrt(se2);

    // Welch-Satterthwaite.  A zero-variance side contributes nothing to the
    // denominator (its weight term is exactly zero), which also covers the
    // n == 1 side where the usual (n-1) divisor would be undefined.
    double denom = 0.0;
    if (wa > 0.0) denom += wa * wa / static_cast<double>(a.size() - 1);
    if (wb > 0.0) denom += wb * wb / static_cast<double>(b.size() - 1);
    r.df = se2 * se2 / denom;
    r.p = student_t_two_sided_p(*r.t, *r.df);
    return r;
}

const char* verdict_letter(TestVerdict v) noexcept {
    switch (v) {
    case TestVerdict::success: return "S";
    case TestVerdict::failure: return "F";
    case TestVerdict::undetermined: return "U";
    }
    return "?";
}

TestVerdict verdict(RegionKind kind, const WelchResult& r, double level) {
    if (!(level > 0.0 && level < 1.0))
        throw domain_error("verdict: level must lie in (0, 1)");
    if (!r.p.has_value() || *r.p > level || r.mean_a == r.mean_b)
        return TestVerdict::undetermined;
    // Significant with a direction; the kind decides which way is better.
    switch (kind) {
    case RegionKind::top_k:
        return r.mean_b > r.mean_a ? TestVerdict::success : TestVerdict::failure;
    case RegionKind::bottom_k:
        return r.mean_b < r.mean_a ? TestVerdict::success : TestVerdict::failure;
    case RegionKind::movers:
        return r.mean_a > r.mean_b ? TestVerdict::success : TestVerdict::failure;
    }
    return TestVerdict::undetermined;
}

std::vector<TestResult> run_comparison(const ScoreTable& scores, const MarkerMatrix& markers,
                                       std::span<const std::size_t> ks, KindSet kinds,
                                       double level) {
    if (ks.empty())
        throw domain_error("run_comparison: no k values given");
    if (!kinds.top && !kinds.bottom && !kinds.movers)
        throw domain_error("run_comparison: no region kinds requested");

    std::vector<std::size_t> ks_sorted(ks.begin(), ks.end());
    std::sort(ks_sorted.begin(), ks_sorted.end());
    ks_sorted.erase(std::unique(ks_sorted.begin(), ks_sorted.end()), ks_sorted.end());

    const RankVector ranks_ref = rank_scores(scores.sample_ids(), scores.ref_scores());
    const RankVector ranks_test = rank_scores(scores.sample_ids(), scores.test_scores());

    std::vector<RegionKind> kind_list;
    if (kinds.top) kind_list.push_back(RegionKind::top_k);
    if (kinds.bottom) kind_list.push_back(RegionKind::bottom_k);
    if (kinds.movers) kind_list.push_back(RegionKind::movers);

    std::vector<TestResult> results;
    results.reserve(kind_list.size() * ks_sorted.size());
    for (RegionKind kind : kind_list) {
        for (std::size_t k : ks_sorted) {
            const RegionPair rp = make_region_pair(kind, ranks_ref, ranks_test, k);
            TestResult tr;
            tr.kind = kind;
            tr.k = k;
            tr.level = level;

            const auto cms_a = combined_score_values(markers, rp.set_a);
            const auto cms_b = combined_score_values(markers, rp.set_b);
            tr.combined = welch_test(cms_a, cms_b);
            tr.combined_verdict = verdict(kind, tr.combined, level);

            tr.per_marker.reserve(markers.marker_count());
            for (std::size_t m = 0; m < markers.marker_count(); ++m) {
                MarkerTestRow row;
                row.marker = markers.marker_names()[m];
                row.stats = welch_test(marker_values(markers, rp.set_a, m),
                                       marker_values(markers, rp.set_b, m));
                row.verdict = verdict(kind, row.stats, level);
                tr.per_marker.push_back(std::move(row));
            }
            results.push_back(std::move(tr));
        }
    }
    return results;
}

} // namespace firenze
