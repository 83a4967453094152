#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "firenze/hypothesis.hpp"
#include "firenze/io.hpp"
#include "firenze/report.hpp"
#include "firenze/simlab.hpp"

namespace firenze {

// The CLI subcommands live here as plain functions over streams so tests
// can drive exactly the code the binary runs.  All of them throw
// firenze::error subclasses; the binary maps those to stderr + exit 1.

struct CompareOptions {
    std::filesystem::path scores_path;
    std::filesystem::path markers_path;
    std::vector<std::size_t> ks;
    KindSet kinds;
    double level = 0.05;
    UnmatchedPolicy policy = UnmatchedPolicy::strict;
    ReportFormat format = ReportFormat::table;
    std::optional<std::filesystem::path> out_path; // stdout when empty
};

// Loads, reconciles, compares, renders.  The report goes to out_path
// (atomic write) or to `out`; warnings and notes go to `err` only.
void cmd_compare(const CompareOptions& opt, std::ostream& out, std::ostream& err);

struct SimulateOptions {
    std::filesystem::path config_path;
    std::filesystem::path out_path;
    unsigned threads = 0; // 0 = hardware count
};

void cmd_simulate(const SimulateOptions& opt, std::ostream& err);

// Sweep configuration file -> validated grid.  Accepted keys: the
// SimulationParams fields (pi, alpha, beta, alpha_bar, beta_bar,
// p_true_ref, p_true_test, p_train_ref, p_train_test, n, k, seed) plus
// alphas, betas, repeats, level.  Unknown keys are an error.
SweepGrid load_sweep_config(const std::filesystem::path& path);

// The sweep result as CSV: alpha,beta,test,s_count,f_count,u_count with
// rows ordered by alpha, then beta, then test (top, bottom, movers).
std::string render_sweep_csv(const SweepGrid& grid);

// voting subcommand bodies; each returns what goes to stdout.
std::string voting_accuracy_output(std::size_t k, double alpha);
std::string voting_accuracy_hetero_output(std::span<const double> alphas);
std::string voting_coverage_output(std::span<const double> betas);
std::string voting_curves_csv(std::span<const std::size_t> ks, std::span<const double> alphas);
std::string voting_marginal_csv(std::span<const double> base_alphas,
                                std::span<const double> candidate_alphas);

// Comma-separated list parsing for CLI flags and config values; `what`
// names the flag/key in error messages.
std::vector<double> parse_double_list(const std::string& s, const std::string& what);
std::vector<std::size_t> parse_size_list(const std::string& s, const std::string& what);
KindSet parse_kind_set(const std::string& s);
UnmatchedPolicy parse_unmatched_policy(const std::string& s);

} // namespace firenze
