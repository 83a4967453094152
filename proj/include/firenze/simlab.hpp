#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "firenze/hypothesis.hpp"

namespace firenze {

// Parameters of the synthetic evaluation world.  Two models score the same
// samples: "ref" is the deployed reference, "test" the candidate.  Ground
// truth is hidden; a fraction beta_bar of samples carries a training-era
// label of accuracy alpha_bar, and both models score a sample consistently
// with its label (training label if present, otherwise ground truth) with
// the per-model probability p_train_* / p_true_*.  A single marker votes on
// a fraction beta of samples and is correct with probability alpha.
struct SimulationParams {
    double pi = 0.5;           // prevalence of the malicious class
    double alpha = 1.0;        // marker accuracy when it votes
    double beta = 1.0;         // marker coverage (probability it votes)
    double alpha_bar = 0.95;   // training label accuracy
    double beta_bar = 0.10;    // training label coverage
    double p_true_ref = 0.90;  // P(ref scores consistently | unlabeled)
    double p_true_test = 0.95; // P(test scores consistently | unlabeled)
    double p_train_ref = 0.98; // P(ref scores consistently | labeled)
    double p_train_test = 0.97;
    std::size_t n = 1'000'000; // dataset size
    std::size_t k = 10'000;    // region size for the three tests
    std::uint64_t seed = 0;

    void validate() const; // throws domain_error naming the offending field
};

// Everything drawn for one sample, including the intermediate coins, so
// tests can check each link of the generative chain directly.
struct SampleDraw {
    std::int8_t y_true = 0;  // ground truth, -1 or +1
    std::int8_t y_train = 0; // training label, 0 when the sample is unlabeled
    std::int8_t marker = 0;  // marker verdict, 0 when it abstains
    double score_ref = 0.0;
    double score_test = 0.0;
    // internal draws
    bool marker_votes = false;   // coverage coin for the marker
    std::int8_t marker_sign = 0; // accuracy coin, +1 correct / -1 flipped
    bool labeled = false;        // coverage coin for the training label
    std::int8_t label_sign = 0;  // accuracy coin for the training label
    double f_ref = 0.0, f_test = 0.0; // positional uniforms inside the band
    bool c_ref = false, c_test = false; // consistency coins per model
};

using Dataset = std::vector<SampleDraw>;

// Draws sample `index` of the dataset.  All randomness for a sample derives
// from (seed, index) alone, so any chunking or parallel survey of the index
// range reproduces the identical dataset.
SampleDraw draw_sample(const SimulationParams& p, std::uint64_t index);

Dataset generate_dataset(const SimulationParams& p);

// Zero-padded sample id, wide enough for n, so lexicographic id order
// equals index order.
std::string sample_id_for(std::uint64_t index, std::size_t n);

// Runs the full comparison (all three region kinds at size k) over a
// generated dataset: scores become the score table, marker verdicts become
// a one-marker matrix.
std::vector<TestResult> run_firenze(const Dataset& data, std::size_t k, double level);

// Deterministic per-cell seed for a sweep repeat, independent of execution
// order.
std::uint64_t derive_seed(std::uint64_t base_seed, std::size_t alpha_idx,
                          std::size_t beta_idx, std::size_t repeat);

// A (marker accuracy x marker coverage) sensitivity sweep.  Each cell runs
// `repeats` simulations with derived seeds and tallies the verdicts of the
// three tests.
struct SweepGrid {
    std::vector<double> alphas; // strictly ascending
    std::vector<double> betas;  // strictly ascending
    std::size_t repeats = 1;
    double level = 0.05;
    SimulationParams base; // alpha/beta are overwritten per cell

    struct Tally {
        int s = 0, f = 0, u = 0;
    };
    // cell(ai, bi)[kind] after run_sweep; kind indexed 0=top, 1=bottom, 2=movers.
    std::vector<std::array<Tally, 3>> cells;

    void validate() const;
    std::array<Tally, 3>& cell(std::size_t alpha_idx, std::size_t beta_idx);
    const std::array<Tally, 3>& cell(std::size_t alpha_idx, std::size_t beta_idx) const;
};

// Fills grid.cells.  Cells are independent; `threads` > 1 distributes them
// over a pool without changing any result bit (0 means use the hardware
// count).  `progress`, if set, is called after each finished cell with
// (cells done, cells total); calls are serialised but not ordered.
using SweepProgress = std::function<void(std::size_t, std::size_t)>;
void run_sweep(SweepGrid& grid, unsigned threads = 0, SweepProgress progress = {});

} // namespace firenze
