#include "firenze/simlab.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <string>
#include <thread>

#include "firenze/errors.hpp"
#include "firenze/marker_matrix.hpp"
#include "firenze/score_table.hpp"

namespace firenze {

namespace {

// 64-bit finalizer (splitmix64's mixing function).  Bijective, strong
// avalanche; used both to key per-sample streams and to derive sweep seeds.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

// Counter-based per-sample random stream.  The state is a strong hash of
// (seed, index), then advances splitmix64-style.  No global engine: sample
// i's draws depend only on (seed, i), which is what makes chunked or
// parallel dataset generation bit-reproducible.
class SampleRng {
public:
    SampleRng(std::uint64_t seed, std::uint64_t index) noexcept
        : state_(mix64(mix64(seed + kGamma) ^ (index + kGamma))) {}

    std::uint64_t next_u64() noexcept {
        state_ += kGamma;
        return mix64(state_);
    }

    // Uniform in [0, 1) with 53 random bits.
    double uniform01() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) noexcept { return lo + uniform01() * (hi - lo); }

    bool coin(double p) noexcept { return uniform01() < p; }

private:
    std::uint64_t state_;
};

void check_unit(double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0))
        throw domain_error("SimulationParams: " + std::string(name) +
                           " must lie in [0, 1], got " + std::to_string(v));
}

} // namespace

void SimulationParams::validate() const {
    // A population with no positive class at all has nothing to rank.
    if (pi <= 0.0)
        throw domain_error("SimulationParams: pi must be positive");
    check_unit(pi, "pi");
    check_unit(alpha, "alpha");
    check_unit(beta, "beta");
    check_unit(alpha_bar, "alpha_bar");
    check_unit(beta_bar, "beta_bar");
    check_unit(p_true_ref, "p_true_ref");
    check_unit(p_true_test, "p_true_test");
    check_unit(p_train_ref, "p_train_ref");
    check_unit(p_train_test, "p_train_test");
    if (n < 2)
        throw domain_error("SimulationParams: n must be >= 2");
    if (k < 1 || 2 * k > n)
        throw domain_error("SimulationParams: k=" + std::to_string(k) +
                           " requires 2k <= n with n=" + std::to_string(n));
}

SampleDraw draw_sample(const SimulationParams& p, std::uint64_t index) {
    SampleRng rng(p.seed, index);
    SampleDraw s;

    // Ground truth, marker, training label.  Every coin is drawn whether or
    // not its branch is taken, so the draw count per sample is constant.
    s.y_true = rng.coin(p.pi) ? 1 : -1;
    s.marker_votes = rng.coin(p.beta);
    s.marker_sign = rng.coin(p.alpha) ? 1 : -1;
    s.labeled = rng.coin(p.beta_bar);
    s.label_sign = rng.coin(p.alpha_bar) ? 1 : -1;
    s.marker = s.marker_votes ? static_cast<std::int8_t>(s.marker_sign * s.y_true) : 0;
    s.y_train = s.labeled ? static_cast<std::int8_t>(s.label_sign * s.y_true) : 0;

    // Each model scores against the training label when one exists, else
    // against ground truth.  The uniform fixes a position inside the class
    // half-interval; the consistency coin decides whether the score stays
    // there or flips to the mirrored position in the other half-interval.
    // The gap around 0.5 keeps the two bands strictly separated.
    const std::int8_t anchor = s.labeled ? s.y_train : s.y_true;
    s.f_ref = anchor == 1 ? rng.uniform(0.51, 1.0) : rng.uniform(0.0, 0.49);
    s.c_ref = rng.coin(s.labeled ? p.p_train_ref : p.p_true_ref);
    s.score_ref = s.c_ref ? s.f_ref : 1.0 - s.f_ref;
    s.f_test = anchor == 1 ? rng.uniform(0.51, 1.0) : rng.uniform(0.0, 0.49);
    s.c_test = rng.coin(s.labeled ? p.p_train_test : p.p_true_test);
    s.score_test = s.c_test ? s.f_test : 1.0 - s.f_test;
    return s;
}

Dataset generate_dataset(const SimulationParams& p) {
    p.validate();
    Dataset data;
    data.reserve(p.n);
    for (std::uint64_t i = 0; i < p.n; ++i) data.push_back(draw_sample(p, i));
    return data;
}

std::string sample_id_for(std::uint64_t index, std::size_t n) {
    std::size_t width = 1;
    for (std::size_t m = n > 0 ? n - 1 : 0; m >= 10; m /= 10) ++width;
    std::string digits = std::to_string(index);
    std::string out = "s";
    out.append(width > digits.size() ? width - digits.size() : 0, '0');
    out += digits;
    return out;
}

std::vector<TestResult> run_firenze(const Dataset& data, std::size_t k, double level) {
    if (data.empty())
        throw domain_error("run_firenze: empty dataset");

    std::vector<ScoreRow> rows;
    rows.reserve(data.size());
    MarkerMatrix::Builder mb;
    for (std::size_t i = 0; i < data.size(); ++i) {
        std::string id = sample_id_for(i, data.size());
        mb.add_sample(id);
        if (data[i].marker != 0)
            mb.set(id, "marker", data[i].marker > 0 ? Verdict::malicious : Verdict::benign);
        rows.push_back({std::move(id), data[i].score_ref, data[i].score_test});
    }
    // Register the marker even if it abstained everywhere, so the report
    // shape does not depend on the draw.
    mb.add_marker("marker");

    const ScoreTable scores = ScoreTable::from_rows(std::move(rows));
    const std::size_t ks[] = {k};
    return run_comparison(scores, mb.build(), ks, KindSet{}, level);
}

std::uint64_t derive_seed(std::uint64_t base_seed, std::size_t alpha_idx,
                          std::size_t beta_idx, std::size_t repeat) {
    std::uint64_t h = mix64(base_seed + kGamma);
    h = mix64(h ^ (static_cast<std::uint64_t>(alpha_idx) + 0x51ED270B7A029Cull));
    h = mix64(h ^ (static_cast<std::uint64_t>(beta_idx) + 0xC2B2AE3D27D4EB4Full));
    h = mix64(h ^ (static_cast<std::uint64_t>(repeat) + 0x165667B19E3779F9ull));
    return h;
}

void SweepGrid::validate() const {
    if (alphas.empty() || betas.empty())
        throw domain_error("SweepGrid: alphas and betas must be non-empty");
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        check_unit(alphas[i], "alphas entry");
        if (i > 0 && alphas[i] <= alphas[i - 1])
            throw domain_error("SweepGrid: alphas must be strictly ascending");
    }
    for (std::size_t i = 0; i < betas.size(); ++i) {
        check_unit(betas[i], "betas entry");
        if (i > 0 && betas[i] <= betas[i - 1])
            throw domain_error("SweepGrid: betas must be strictly ascending");
    }
    if (repeats < 1)
        throw domain_error("SweepGrid: repeats must be >= 1");
    if (!(level > 0.0 && level < 1.0))
        throw domain_error("SweepGrid: level must lie in (0, 1)");
    SimulationParams check = base;
    check.alpha = alphas.front();
    check.beta = betas.front();
    check.validate();
}

std::array<SweepGrid::Tally, 3>& SweepGrid::cell(std::size_t alpha_idx, std::size_t beta_idx) {
    return cells.at(alpha_idx * betas.size() + beta_idx);
}

const std::array<SweepGrid::Tally, 3>& SweepGrid::cell(std::size_t alpha_idx,
                                                       std::size_t beta_idx) const {
    return cells.at(alpha_idx * betas.size() + beta_idx);
}

void run_sweep(SweepGrid& grid, unsigned threads, SweepProgress progress) {
    grid.validate();
    const std::size_t na = grid.alphas.size();
    const std::size_t nb = grid.betas.size();
    const std::size_t n_cells = na * nb;
    const std::size_t n_jobs = n_cells * grid.repeats;
    grid.cells.assign(n_cells, {});

    // One slot per (cell, repeat); workers write disjoint slots, so the
    // final tally is independent of scheduling.
    std::vector<std::array<TestVerdict, 3>> slots(n_jobs);
    std::atomic<std::size_t> next_job{0};
    std::vector<std::atomic<std::size_t>> repeats_done(n_cells);
    for (auto& r : repeats_done) r.store(0);
    std::atomic<std::size_t> cells_done{0};
    std::mutex progress_mutex;

    auto worker = [&]() {
        for (;;) {
            const std::size_t job = next_job.fetch_add(1);
            if (job >= n_jobs) return;
            const std::size_t cell_idx = job / grid.repeats;
            const std::size_t repeat = job % grid.repeats;
            const std::size_t ai = cell_idx / nb;
            const std::size_t bi = cell_idx % nb;

            SimulationParams p = grid.base;
            p.alpha = grid.alphas[ai];
            p.beta = grid.betas[bi];
            p.seed = derive_seed(grid.base.seed, ai, bi, repeat);
            const auto results = run_firenze(generate_dataset(p), p.k, grid.level);
            auto& slot = slots[job];
            slot = {TestVerdict::undetermined, TestVerdict::undetermined,
                    TestVerdict::undetermined};
            for (const auto& tr : results)
                slot[static_cast<std::size_t>(tr.kind)] = tr.combined_verdict;

            if (repeats_done[cell_idx].fetch_add(1) + 1 == grid.repeats) {
                const std::size_t done = cells_done.fetch_add(1) + 1;
                if (progress) {
                    std::lock_guard<std::mutex> lock(progress_mutex);
                    progress(done, n_cells);
                }
            }
        }
    };

    unsigned pool = threads != 0 ? threads : std::thread::hardware_concurrency();
    if (pool == 0) pool = 1;
    pool = static_cast<unsigned>(std::min<std::size_t>(pool, n_jobs));
    if (pool <= 1) {
        worker();
    } else {
        std::vector<std::thread> ts;
        ts.reserve(pool);
        for (unsigned i = 0; i < pool; ++i) ts.emplace_back(worker);
        for (auto& t : ts) t.join();
    }

    for (std::size_t job = 0; job < n_jobs; ++job) {
        const std::size_t cell_idx = job / grid.repeats;
        for (std::size_t kind = 0; kind < 3; ++kind) {
            auto& tally = grid.cells[cell_idx][kind];
            switch (slots[job][kind]) {
            case TestVerdict::success: ++tally.s; break;
            case TestVerdict::failure: ++tally.f; break;
            case TestVerdict::undetermined: ++tally.u; break;
            }
        }
    }
}

} // namespace firenze
