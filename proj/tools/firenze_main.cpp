#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "firenze/commands.hpp"
#include "firenze/errors.hpp"

namespace {

// Flags arrive as raw strings and are parsed by the same helpers the
// library tests exercise; every failure surfaces as a firenze::error.
struct CompareFlags {
    std::string scores, markers, ks = "", tests = "top,bottom,movers";
    std::string unmatched = "strict", format = "table", out;
    double level = 0.05;
};

struct SimulateFlags {
    std::string config, out;
    unsigned threads = 0;
};

struct VotingFlags {
    std::size_t k = 0;
    double alpha = -1.0;
    std::string alphas, betas, k_values, alpha_values, base_alphas, new_alphas, out;
};

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty())
        std::cout << text;
    else
        firenze::write_file_atomic(out_path, text);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Label-free comparison of two scoring models via weak markers"};
    app.require_subcommand(1);

    CompareFlags cf;
    CLI::App* compare = app.add_subcommand(
        "compare", "Compare two models' scores over rank regions using marker verdicts");
    compare->add_option("--scores", cf.scores, "Score file (csv or jsonl)")->required();
    compare->add_option("--markers", cf.markers, "Marker verdict file (csv or jsonl)")
        ->required();
    compare->add_option("--k", cf.ks, "Region size(s), comma separated")->required();
    compare->add_option("--tests", cf.tests, "Tests to run: top,bottom,movers");
    compare->add_option("--level", cf.level, "Significance level (default 0.05)");
    compare->add_option("--unmatched", cf.unmatched,
                        "Marker samples missing from scores: strict|abstain");
    compare->add_option("--format", cf.format, "Output format: table|csv|json");
    compare->add_option("--out", cf.out, "Write the report to this file (default stdout)");

    SimulateFlags sf;
    CLI::App* simulate =
        app.add_subcommand("simulate", "Run a marker accuracy/coverage sensitivity sweep");
    simulate->add_option("--config", sf.config, "Sweep configuration file (key=value)")
        ->required();
    simulate->add_option("--out", sf.out, "Output CSV path")->required();
    simulate->add_option("--threads", sf.threads, "Worker threads (0 = hardware count)");

    CLI::App* voting = app.add_subcommand("voting", "Majority-voting analysis tools");
    voting->require_subcommand(1);
    VotingFlags vf;

    CLI::App* accuracy =
        voting->add_subcommand("accuracy", "Majority-vote accuracy of a marker ensemble");
    accuracy->add_option("--k", vf.k, "Number of identical markers");
    accuracy->add_option("--alpha", vf.alpha, "Per-marker accuracy");
    accuracy->add_option("--alphas", vf.alphas,
                         "Individual marker accuracies, comma separated (alternative)");

    CLI::App* coverage =
        voting->add_subcommand("coverage", "Combined coverage of independent markers");
    coverage->add_option("--betas", vf.betas, "Per-marker coverages, comma separated")
        ->required();

    CLI::App* curves =
        voting->add_subcommand("curves", "Accuracy over a (k, alpha) grid as CSV");
    curves->add_option("--k-values", vf.k_values, "Ensemble sizes, comma separated")
        ->required();
    curves->add_option("--alpha-values", vf.alpha_values, "Accuracies, comma separated")
        ->required();
    curves->add_option("--out", vf.out, "Write CSV to this file (default stdout)");

    CLI::App* marginal = voting->add_subcommand(
        "marginal", "Accuracy impact of adding one marker to an ensemble");
    marginal->add_option("--base-alphas", vf.base_alphas,
                         "Existing marker accuracies, comma separated")
        ->required();
    marginal->add_option("--new-alphas", vf.new_alphas,
                         "Candidate marker accuracies, comma separated")
        ->required();
    marginal->add_option("--out", vf.out, "Write CSV to this file (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (compare->parsed()) {
            firenze::CompareOptions opt;
            opt.scores_path = cf.scores;
            opt.markers_path = cf.markers;
            opt.ks = firenze::parse_size_list(cf.ks, "--k");
            opt.kinds = firenze::parse_kind_set(cf.tests);
            opt.level = cf.level;
            opt.policy = firenze::parse_unmatched_policy(cf.unmatched);
            opt.format = firenze::report_format_from_string(cf.format);
            if (!cf.out.empty()) opt.out_path = cf.out;
            firenze::cmd_compare(opt, std::cout, std::cerr);
        } else if (simulate->parsed()) {
            firenze::SimulateOptions opt;
            opt.config_path = sf.config;
            opt.out_path = sf.out;
            opt.threads = sf.threads;
            firenze::cmd_simulate(opt, std::cerr);
        } else if (accuracy->parsed()) {
            if (!vf.alphas.empty()) {
                const auto alphas = firenze::parse_double_list(vf.alphas, "--alphas");
                std::cout << firenze::voting_accuracy_hetero_output(alphas);
            } else {
                if (vf.k == 0 || vf.alpha < 0.0)
                    throw firenze::domain_error(
                        "voting accuracy requires --k and --alpha (or --alphas)");
                std::cout << firenze::voting_accuracy_output(vf.k, vf.alpha);
            }
        } else if (coverage->parsed()) {
            const auto betas = firenze::parse_double_list(vf.betas, "--betas");
            std::cout << firenze::voting_coverage_output(betas);
        } else if (curves->parsed()) {
            const auto ks = firenze::parse_size_list(vf.k_values, "--k-values");
            const auto alphas = firenze::parse_double_list(vf.alpha_values, "--alpha-values");
            emit(firenze::voting_curves_csv(ks, alphas), vf.out);
        } else if (marginal->parsed()) {
            const auto base = firenze::parse_double_list(vf.base_alphas, "--base-alphas");
            const auto cand = firenze::parse_double_list(vf.new_alphas, "--new-alphas");
            emit(firenze::voting_marginal_csv(base, cand), vf.out);
        }
    } catch (const firenze::error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
