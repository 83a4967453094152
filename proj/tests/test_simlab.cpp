#include <doctest.h>

#include <cmath>
#include <cstring>
#include <set>
#include <vector>

#include "firenze/errors.hpp"
#include "firenze/simlab.hpp"

using namespace firenze;

namespace {

SimulationParams small_params() {
    SimulationParams p;
    p.n = 100'000;
    p.k = 1'000;
    p.seed = 12345;
    return p;
}

// 3-standard-error band for an empirical proportion.
bool within_3se(double observed, double expected, std::size_t n) {
    double se = std::sqrt(expected * (1.0 - expected) / static_cast<double>(n));
    return std::abs(observed - expected) <= 3.0 * se + 1e-12;
}

} // namespace

TEST_CASE("prevalence one makes every sample malicious") {
    auto p = small_params();
    p.pi = 1.0;
    p.n = 5'000;
    p.k = 100;
    for (const auto& s : generate_dataset(p)) {
        CHECK(s.y_true == 1);
    }
}

TEST_CASE("a perfect full-coverage marker equals the ground truth") {
    auto p = small_params();
    p.alpha = 1.0;
    p.beta = 1.0;
    p.n = 5'000;
    p.k = 100;
    for (const auto& s : generate_dataset(p)) {
        CHECK(s.marker == s.y_true);
    }
}

TEST_CASE("zero coverage means the marker never votes") {
    auto p = small_params();
    p.beta = 0.0;
    p.n = 2'000;
    p.k = 50;
    for (const auto& s : generate_dataset(p)) {
        CHECK(s.marker == 0);
        CHECK_FALSE(s.marker_votes);
    }
}

TEST_CASE("every generated sample satisfies the structural chain invariants") {
    auto p = small_params();
    p.alpha = 0.8;
    p.beta = 0.6;
    p.n = 20'000;
    p.k = 500;
    auto data = generate_dataset(p);
    for (const auto& s : data) {
        // Ground truth is a strict sign.
        CHECK((s.y_true == 1 || s.y_true == -1));
        // The marker votes iff its coverage coin came up.
        CHECK((s.marker != 0) == s.marker_votes);
        if (s.marker_votes) CHECK(s.marker == s.marker_sign * s.y_true);
        // The training label exists iff its coverage coin came up.
        CHECK((s.y_train != 0) == s.labeled);
        if (s.labeled) CHECK(s.y_train == s.label_sign * s.y_true);
        // Scores live strictly inside the two bands, never at one half.
        for (double sc : {s.score_ref, s.score_test}) {
            CHECK(sc > 0.0);
            CHECK(sc < 1.0);
            CHECK((sc < 0.49 || sc > 0.51));
        }
        // The consistency coin decides which side of 0.5 the score falls,
        // relative to the label the model actually saw.
        std::int8_t anchor = s.labeled ? s.y_train : s.y_true;
        std::int8_t wants_high = (anchor == 1) ? 1 : -1;
        std::int8_t ref_side = (s.score_ref > 0.5) ? 1 : -1;
        std::int8_t test_side = (s.score_test > 0.5) ? 1 : -1;
        CHECK(ref_side == (s.c_ref ? wants_high : -wants_high));
        CHECK(test_side == (s.c_test ? wants_high : -wants_high));
    }
}

TEST_CASE("empirical rates converge to the configured probabilities") {
    auto p = small_params();
    p.alpha = 0.8;
    p.beta = 0.6;
    auto data = generate_dataset(p);

    std::size_t votes = 0, correct_votes = 0, labeled = 0, positives = 0;
    std::size_t unlabeled_ref_ok = 0, unlabeled_test_ok = 0, unlabeled_count = 0;
    std::size_t labeled_ref_ok = 0, labeled_test_ok = 0;
    for (const auto& s : data) {
        if (s.y_true == 1) ++positives;
        if (s.marker != 0) {
            ++votes;
            if (s.marker == s.y_true) ++correct_votes;
        }
        std::int8_t anchor = s.labeled ? s.y_train : s.y_true;
        bool ref_ok = (s.score_ref > 0.5) == (anchor == 1);
        bool test_ok = (s.score_test > 0.5) == (anchor == 1);
        if (s.labeled) {
            ++labeled;
            labeled_ref_ok += ref_ok;
            labeled_test_ok += test_ok;
        } else {
            ++unlabeled_count;
            unlabeled_ref_ok += ref_ok;
            unlabeled_test_ok += test_ok;
        }
    }

    CHECK(within_3se(static_cast<double>(positives) / p.n, p.pi, p.n));
    CHECK(within_3se(static_cast<double>(votes) / p.n, p.beta, p.n));
    CHECK(within_3se(static_cast<double>(correct_votes) / votes, p.alpha, votes));
    CHECK(within_3se(static_cast<double>(labeled) / p.n, p.beta_bar, p.n));
    CHECK(within_3se(static_cast<double>(unlabeled_ref_ok) / unlabeled_count,
                     p.p_true_ref, unlabeled_count));
    CHECK(within_3se(static_cast<double>(unlabeled_test_ok) / unlabeled_count,
                     p.p_true_test, unlabeled_count));
    CHECK(within_3se(static_cast<double>(labeled_ref_ok) / labeled, p.p_train_ref,
                     labeled));
    CHECK(within_3se(static_cast<double>(labeled_test_ok) / labeled, p.p_train_test,
                     labeled));
}

TEST_CASE("generation is reproducible and chunk independent") {
    auto p = small_params();
    p.n = 10'000;
    p.k = 100;
    auto a = generate_dataset(p);
    auto b = generate_dataset(p);
    REQUIRE(a.size() == b.size());
    CHECK(std::memcmp(a.data(), b.data(), a.size() * sizeof(SampleDraw)) == 0);

    // Each sample is a pure function of (seed, index).
    for (std::uint64_t i : {std::uint64_t{0}, std::uint64_t{17}, std::uint64_t{9999}}) {
        auto s = draw_sample(p, i);
        CHECK(std::memcmp(&s, &a[i], sizeof(SampleDraw)) == 0);
    }

    // A different seed changes the draws.
    auto p2 = p;
    p2.seed = p.seed + 1;
    auto c = generate_dataset(p2);
    CHECK(std::memcmp(a.data(), c.data(), a.size() * sizeof(SampleDraw)) != 0);
}

TEST_CASE("sample ids are zero padded so id order is index order") {
    CHECK(sample_id_for(0, 1000) == "s000");
    CHECK(sample_id_for(42, 1000) == "s042");
    CHECK(sample_id_for(999, 1000) == "s999");
    CHECK(sample_id_for(7, 10) == "s7");
    std::set<std::string> ids;
    for (std::uint64_t i = 0; i < 200; ++i) ids.insert(sample_id_for(i, 200));
    CHECK(ids.size() == 200);
    CHECK(*ids.begin() == "s000");
    CHECK(*ids.rbegin() == "s199");
}

TEST_CASE("parameter validation rejects out-of-range fields by name") {
    auto p = small_params();
    p.pi = 0.0;
    CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("pi"), domain_error);
    p = small_params();
    p.alpha = 1.5;
    CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("alpha"), domain_error);
    p = small_params();
    p.p_train_test = -0.2;
    CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("p_train_test"), domain_error);
    p = small_params();
    p.k = 0;
    CHECK_THROWS_AS(p.validate(), domain_error);
    p = small_params();
    p.k = p.n / 2 + 1; // movers regions must fit
    CHECK_THROWS_AS(p.validate(), domain_error);
    CHECK_NOTHROW(small_params().validate());
}

TEST_CASE("identical model scores leave all three tests undetermined") {
    auto p = small_params();
    p.n = 2'000;
    p.k = 50;
    auto data = generate_dataset(p);
    for (auto& s : data) s.score_test = s.score_ref;
    auto results = run_firenze(data, p.k, 0.05);
    REQUIRE(results.size() == 3);
    for (const auto& r : results) {
        CHECK(r.combined_verdict == TestVerdict::undetermined);
    }
}

TEST_CASE("a strong marker detects the better test model in a single run") {
    // Test model is consistent 95% of the time vs 90% for the reference;
    // with a strong marker, all three tests should call the improvement.
    auto p = small_params();
    p.alpha = 0.9;
    p.beta = 0.8;
    auto results = run_firenze(generate_dataset(p), p.k, 0.05);
    REQUIRE(results.size() == 3);
    CHECK(results[0].kind == RegionKind::top_k);
    CHECK(results[2].kind == RegionKind::movers);
    // Movers concentrates the disagreement; it must call S here.
    CHECK(results[2].combined_verdict == TestVerdict::success);
}

TEST_CASE("derived seeds differ across cells and repeats") {
    std::set<std::uint64_t> seen;
    for (std::size_t a = 0; a < 5; ++a) {
        for (std::size_t b = 0; b < 5; ++b) {
            for (std::size_t r = 0; r < 3; ++r) {
                seen.insert(derive_seed(99, a, b, r));
            }
        }
    }
    CHECK(seen.size() == 5 * 5 * 3);
    CHECK(derive_seed(99, 1, 2, 0) == derive_seed(99, 1, 2, 0));
    CHECK(derive_seed(99, 1, 2, 0) != derive_seed(100, 1, 2, 0));
    // Argument positions are not interchangeable.
    CHECK(derive_seed(99, 2, 1, 0) != derive_seed(99, 1, 2, 0));
}

TEST_CASE("a one-cell sweep equals a direct run with the derived seed") {
    SweepGrid grid;
    grid.alphas = {0.9};
    grid.betas = {0.8};
    grid.repeats = 1;
    grid.base = small_params();
    grid.base.n = 5'000;
    grid.base.k = 100;
    run_sweep(grid, 1);

    auto p = grid.base;
    p.alpha = 0.9;
    p.beta = 0.8;
    p.seed = derive_seed(grid.base.seed, 0, 0, 0);
    auto results = run_firenze(generate_dataset(p), p.k, grid.level);

    const auto& tallies = grid.cell(0, 0);
    for (std::size_t kind = 0; kind < 3; ++kind) {
        int s = results[kind].combined_verdict == TestVerdict::success ? 1 : 0;
        int f = results[kind].combined_verdict == TestVerdict::failure ? 1 : 0;
        int u = results[kind].combined_verdict == TestVerdict::undetermined ? 1 : 0;
        CHECK(tallies[kind].s == s);
        CHECK(tallies[kind].f == f);
        CHECK(tallies[kind].u == u);
    }
}

TEST_CASE("sweep tallies sum to the repeat count in every cell") {
    SweepGrid grid;
    grid.alphas = {0.2, 0.5, 0.9};
    grid.betas = {0.3, 0.6, 1.0};
    grid.repeats = 2;
    grid.base = small_params();
    grid.base.n = 2'000;
    grid.base.k = 40;
    run_sweep(grid);
    REQUIRE(grid.cells.size() == 9);
    for (std::size_t ai = 0; ai < 3; ++ai) {
        for (std::size_t bi = 0; bi < 3; ++bi) {
            for (const auto& tally : grid.cell(ai, bi)) {
                CHECK(tally.s + tally.f + tally.u == 2);
            }
        }
    }
}

TEST_CASE("sweep results do not depend on the thread count") {
    auto make_grid = [] {
        SweepGrid g;
        g.alphas = {0.3, 0.9};
        g.betas = {0.5, 1.0};
        g.repeats = 2;
        g.base = small_params();
        g.base.n = 2'000;
        g.base.k = 40;
        return g;
    };
    auto serial = make_grid();
    run_sweep(serial, 1);
    auto parallel = make_grid();
    run_sweep(parallel, 4);
    for (std::size_t ai = 0; ai < 2; ++ai) {
        for (std::size_t bi = 0; bi < 2; ++bi) {
            for (std::size_t kind = 0; kind < 3; ++kind) {
                CHECK(serial.cell(ai, bi)[kind].s == parallel.cell(ai, bi)[kind].s);
                CHECK(serial.cell(ai, bi)[kind].f == parallel.cell(ai, bi)[kind].f);
                CHECK(serial.cell(ai, bi)[kind].u == parallel.cell(ai, bi)[kind].u);
            }
        }
    }
}

TEST_CASE("sweep progress reports every cell exactly once") {
    SweepGrid grid;
    grid.alphas = {0.4, 0.8};
    grid.betas = {0.7};
    grid.repeats = 1;
    grid.base = small_params();
    grid.base.n = 1'000;
    grid.base.k = 20;
    std::vector<std::pair<std::size_t, std::size_t>> calls;
    run_sweep(grid, 1, [&](std::size_t done, std::size_t total) {
        calls.push_back({done, total});
    });
    REQUIRE(calls.size() == 2);
    CHECK(calls.back().first == 2);
    CHECK(calls.back().second == 2);
}

TEST_CASE("sweep grids validate their axes") {
    SweepGrid grid;
    grid.alphas = {0.5, 0.4}; // not ascending
    grid.betas = {0.5};
    grid.base = small_params();
    CHECK_THROWS_AS(grid.validate(), domain_error);
    grid.alphas = {};
    CHECK_THROWS_AS(grid.validate(), domain_error);
    grid.alphas = {0.4, 0.5};
    grid.repeats = 0;
    CHECK_THROWS_AS(grid.validate(), domain_error);
}
