#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "firenze/markers.hpp"
#include "firenze/regions.hpp"
#include "firenze/score_table.hpp"

namespace firenze {

// Welch's unequal-variance t-test between two value lists.  Variances use
// the n-1 denominator; a single-element list has variance zero.
//
// Degenerate inputs are carried explicitly instead of through NaN
// arithmetic: when both variances are zero and the means are equal there is
// no test to run (t, df, p all empty); when both variances are zero but the
// means differ, the separation is perfect, reported as p = 0 with t at
// +/- infinity (sign of mean_a - mean_b) and df empty.
struct WelchResult {
    double mean_a = 0.0;
    double mean_b = 0.0;
    double var_a = 0.0;
    double var_b = 0.0;
    std::size_t n_a = 0;
    std::size_t n_b = 0;
    std::optional<double> t;
    std::optional<double> df;
    std::optional<double> p;
};

WelchResult welch_test(std::span<const double> a, std::span<const double> b);

// Outcome of one region comparison at a significance level.
//   success:      significant in the direction that says the test model
//                 improved on the reference model for this region kind.
//   failure:      significant in the opposite direction.
//   undetermined: not significant, or the test was undefined.
enum class TestVerdict {
    success,
    failure,
    undetermined,
};

const char* verdict_letter(TestVerdict v) noexcept; // "S", "F", "U"

// Directional mapping per region kind, with set_a/set_b as produced by
// make_region_pair.  TopK improves when the test model's top region scores
// higher (mean_b > mean_a); BottomK improves when its bottom region scores
// lower; Movers improves when up-movers (a) score higher than down-movers (b).
TestVerdict verdict(RegionKind kind, const WelchResult& r, double level = 0.05);

struct MarkerTestRow {
    std::string marker;
    WelchResult stats;
    TestVerdict verdict = TestVerdict::undetermined;
};

struct TestResult {
    RegionKind kind = RegionKind::top_k;
    std::size_t k = 0;
    double level = 0.05;
    WelchResult combined;     // over per-sample combined marker scores
    TestVerdict combined_verdict = TestVerdict::undetermined;
    std::vector<MarkerTestRow> per_marker; // raw verdicts, matrix marker order
};

// Which region kinds to run.  Iteration order is fixed (top, bottom,
// movers) regardless of how the caller filled this in.
struct KindSet {
    bool top = true;
    bool bottom = true;
    bool movers = true;
};

// Runs every requested (kind, k) comparison: ranks both score columns once,
// builds the region pair, then Welch-tests the combined marker scores and
// each marker's raw verdicts.  Results are ordered by kind (top, bottom,
// movers), then ascending k.  ks must be valid for N (k <= N, and 2k <= N
// when movers is requested).
std::vector<TestResult> run_comparison(const ScoreTable& scores, const MarkerMatrix& markers,
                                       std::span<const std::size_t> ks, KindSet kinds,
                                       double level);

} // namespace firenze
