#include "firenze/commands.hpp"

#include <cerrno>
#include <cstdlib>
#include <set>
#include <sstream>

#include "firenze/errors.hpp"
#include "firenze/voting.hpp"

namespace firenze {

namespace {

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            parts.push_back(cur);
            cur.clear();
        } else if (c != ' ' && c != '\t') {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

double to_double(const std::string& s, const std::string& what) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end == s.c_str() || *end != '\0' || errno == ERANGE)
        throw format_error(what + ": cannot parse number '" + s + "'");
    return v;
}

std::size_t to_size(const std::string& s, const std::string& what) {
    errno = 0;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
    if (s.empty() || end == s.c_str() || *end != '\0' || errno == ERANGE ||
        s.front() == '-')
        throw format_error(what + ": cannot parse non-negative integer '" + s + "'");
    return static_cast<std::size_t>(v);
}

} // namespace

std::vector<double> parse_double_list(const std::string& s, const std::string& what) {
    std::vector<double> out;
    for (const auto& part : split_commas(s)) out.push_back(to_double(part, what));
    return out;
}

std::vector<std::size_t> parse_size_list(const std::string& s, const std::string& what) {
    std::vector<std::size_t> out;
    for (const auto& part : split_commas(s)) out.push_back(to_size(part, what));
    return out;
}

KindSet parse_kind_set(const std::string& s) {
    KindSet kinds{false, false, false};
    for (const auto& part : split_commas(s)) {
        if (part == "top")
            kinds.top = true;
        else if (part == "bottom")
            kinds.bottom = true;
        else if (part == "movers")
            kinds.movers = true;
        else
            throw format_error("--tests: unknown test '" + part +
                               "' (expected top, bottom or movers)");
    }
    return kinds;
}

UnmatchedPolicy parse_unmatched_policy(const std::string& s) {
    if (s == "strict") return UnmatchedPolicy::strict;
    if (s == "abstain") return UnmatchedPolicy::abstain;
    throw format_error("--unmatched: expected strict or abstain, got '" + s + "'");
}

void cmd_compare(const CompareOptions& opt, std::ostream& out, std::ostream& err) {
    const ScoreTable scores = load_score_file(opt.scores_path);
    const MarkerMatrix raw = load_marker_file(opt.markers_path);

    std::size_t dropped = 0;
    const MarkerMatrix markers = reconcile(raw, scores, opt.policy, &dropped);
    if (dropped > 0)
        err << "warning: dropped " << dropped
            << " marker-file sample(s) absent from the score table\n";

    const auto results = run_comparison(scores, markers, opt.ks, opt.kinds, opt.level);
    const std::string report = render_report(results, opt.format);
    if (opt.out_path)
        write_file_atomic(*opt.out_path, report);
    else
        out << report;
}

SweepGrid load_sweep_config(const std::filesystem::path& path) {
    static const std::set<std::string> known = {
        "pi", "alpha", "beta", "alpha_bar", "beta_bar", "p_true_ref", "p_true_test",
        "p_train_ref", "p_train_test", "n", "k", "seed", "alphas", "betas", "repeats",
        "level"};
    const auto kv = parse_kv_config(path);
    for (const auto& [key, value] : kv)
        if (!known.count(key))
            throw format_error(path.string() + ": unknown config key '" + key + "'");

    SweepGrid grid;
    auto get = [&](const char* key) -> const std::string* {
        auto it = kv.find(key);
        return it == kv.end() ? nullptr : &it->second;
    };
    auto need = [&](const char* key) -> const std::string& {
        const std::string* v = get(key);
        if (!v)
            throw format_error(path.string() + ": missing required config key '" +
                               std::string(key) + "'");
        return *v;
    };

    if (const auto* v = get("pi")) grid.base.pi = to_double(*v, "pi");
    if (const auto* v = get("alpha")) grid.base.alpha = to_double(*v, "alpha");
    if (const auto* v = get("beta")) grid.base.beta = to_double(*v, "beta");
    if (const auto* v = get("alpha_bar")) grid.base.alpha_bar = to_double(*v, "alpha_bar");
    if (const auto* v = get("beta_bar")) grid.base.beta_bar = to_double(*v, "beta_bar");
    if (const auto* v = get("p_true_ref")) grid.base.p_true_ref = to_double(*v, "p_true_ref");
    if (const auto* v = get("p_true_test"))
        grid.base.p_true_test = to_double(*v, "p_true_test");
    if (const auto* v = get("p_train_ref"))
        grid.base.p_train_ref = to_double(*v, "p_train_ref");
    if (const auto* v = get("p_train_test"))
        grid.base.p_train_test = to_double(*v, "p_train_test");
    if (const auto* v = get("n")) grid.base.n = to_size(*v, "n");
    if (const auto* v = get("k")) grid.base.k = to_size(*v, "k");
    if (const auto* v = get("seed"))
        grid.base.seed = static_cast<std::uint64_t>(to_size(*v, "seed"));
    if (const auto* v = get("level")) grid.level = to_double(*v, "level");
    grid.alphas = parse_double_list(need("alphas"), "alphas");
    grid.betas = parse_double_list(need("betas"), "betas");
    grid.repeats = to_size(need("repeats"), "repeats");
    grid.validate();
    return grid;
}

std::string render_sweep_csv(const SweepGrid& grid) {
    std::ostringstream out;
    out << "alpha,beta,test,s_count,f_count,u_count\n";
    static const char* kind_names[] = {"top", "bottom", "movers"};
    for (std::size_t ai = 0; ai < grid.alphas.size(); ++ai) {
        for (std::size_t bi = 0; bi < grid.betas.size(); ++bi) {
            const auto& tallies = grid.cell(ai, bi);
            for (std::size_t kind = 0; kind < 3; ++kind) {
                const auto& t = tallies[kind];
                out << format_number(grid.alphas[ai]) << ',' << format_number(grid.betas[bi])
                    << ',' << kind_names[kind] << ',' << t.s << ',' << t.f << ',' << t.u
                    << '\n';
            }
        }
    }
    return std::move(out).str();
}

void cmd_simulate(const SimulateOptions& opt, std::ostream& err) {
    SweepGrid grid = load_sweep_config(opt.config_path);
    run_sweep(grid, opt.threads, [&err](std::size_t done, std::size_t total) {
        err << "sweep: " << done << "/" << total << " cells done\n";
    });
    write_file_atomic(opt.out_path, render_sweep_csv(grid));
}

std::string voting_accuracy_output(std::size_t k, double alpha) {
    return format_number(majority_accuracy(k, alpha).p_correct) + "\n";
}

std::string voting_accuracy_hetero_output(std::span<const double> alphas) {
    return format_number(majority_accuracy_hetero(alphas).p_correct) + "\n";
}

std::string voting_coverage_output(std::span<const double> betas) {
    return format_number(combined_coverage(betas)) + "\n";
}

std::string voting_curves_csv(std::span<const std::size_t> ks,
                              std::span<const double> alphas) {
    std::ostringstream out;
    out << "k,alpha,p_correct\n";
    for (const auto& pt : accuracy_curves(ks, alphas))
        out << pt.k << ',' << format_number(pt.alpha) << ',' << format_number(pt.p_correct)
            << '\n';
    return std::move(out).str();
}

std::string voting_marginal_csv(std::span<const double> base_alphas,
                                std::span<const double> candidate_alphas) {
    std::ostringstream out;
    out << "alpha_new,p_correct_with,p_correct_without\n";
    for (const auto& row : marginal_marker_impact(base_alphas, candidate_alphas))
        out << format_number(row.alpha_new) << ',' << format_number(row.p_with) << ','
            << format_number(row.p_without) << '\n';
    return std::move(out).str();
}

} // namespace firenze
