#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "firenze/commands.hpp"
#include "firenze/errors.hpp"

using namespace firenze;
namespace fs = std::filesystem;

namespace {

struct Scratch {
    fs::path dir;
    Scratch() {
        dir = fs::temp_directory_path() /
              ("firenze_cli_test_" + std::to_string(std::random_device{}()));
        fs::create_directories(dir);
    }
    ~Scratch() { fs::remove_all(dir); }
    fs::path file(const std::string& name, const std::string& content) const {
        fs::path p = dir / name;
        std::ofstream out(p, std::ios::binary);
        out << content;
        return p;
    }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// The checked-in six-sample fixture; data/ sits beside the test binary.
CompareOptions toy_options(ReportFormat format) {
    CompareOptions opt;
    opt.scores_path = "data/toy_scores.csv";
    opt.markers_path = "data/toy_markers.csv";
    opt.ks = {2};
    opt.format = format;
    return opt;
}

std::string run_compare(const CompareOptions& opt, std::string* err_text = nullptr) {
    std::ostringstream out, err;
    cmd_compare(opt, out, err);
    if (err_text) *err_text = err.str();
    return out.str();
}

// A fixture with perfect separation in every region, so p collapses to zero.
const char* kSeparatedScores =
    "sample_id,score_ref,score_test\n"
    "s1,0.80,0.05\n"
    "s2,0.70,0.10\n"
    "s3,0.10,0.90\n"
    "s4,0.15,0.85\n"
    "s5,0.30,0.30\n"
    "s6,0.40,0.40\n"
    "s7,0.50,0.50\n"
    "s8,0.60,0.60\n";
const char* kSeparatedMarkers =
    "sample_id,marker,verdict\n"
    "s1,m,-1\n"
    "s2,m,-1\n"
    "s3,m,1\n"
    "s4,m,1\n";

} // namespace

TEST_CASE("the toy comparison matches the checked-in goldens byte for byte") {
    CHECK(run_compare(toy_options(ReportFormat::table)) ==
          slurp("data/toy_report_table.txt"));
    CHECK(run_compare(toy_options(ReportFormat::csv)) == slurp("data/toy_report.csv"));
    CHECK(run_compare(toy_options(ReportFormat::json)) == slurp("data/toy_report.json"));
}

TEST_CASE("input row order never changes a single output byte") {
    Scratch s;
    // The toy fixtures, rows deliberately shuffled.
    auto scores = s.file("scores.csv",
                         "sample_id,score_ref,score_test\n"
                         "f,0.4,0.6\n"
                         "c,0.1,0.9\n"
                         "a,0.9,0.1\n"
                         "e,0.2,0.8\n"
                         "b,0.5,0.5\n"
                         "d,0.7,0.2\n");
    auto markers = s.file("markers.csv",
                          "sample_id,marker,verdict\n"
                          "f,m2,1\n"
                          "b,m1,-1\n"
                          "e,m1,1\n"
                          "a,m1,1\n"
                          "d,m1,-1\n"
                          "c,m1,1\n");
    for (ReportFormat f : {ReportFormat::table, ReportFormat::csv, ReportFormat::json}) {
        auto expect = run_compare(toy_options(f));
        auto opt = toy_options(f);
        opt.scores_path = scores;
        opt.markers_path = markers;
        CHECK(run_compare(opt) == expect);
    }
}

TEST_CASE("csv and json reports carry identical numeric values") {
    auto csv_text = run_compare(toy_options(ReportFormat::csv));
    auto json_text = run_compare(toy_options(ReportFormat::json));
    auto doc = nlohmann::json::parse(json_text);

    // Flatten the json rows in report order.
    std::vector<nlohmann::json> json_rows;
    for (const auto& result : doc.at("results")) {
        for (const auto& row : result.at("rows")) json_rows.push_back(row);
    }

    // Parse the csv body.
    std::istringstream lines(csv_text);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "test,k,marker,mean_a,mean_b,var_a,var_b,n_a,n_b,t,df,p,verdict");
    std::size_t row_idx = 0;
    while (std::getline(lines, line)) {
        REQUIRE(row_idx < json_rows.size());
        std::vector<std::string> fields;
        std::istringstream fl(line);
        std::string f;
        while (std::getline(fl, f, ',')) fields.push_back(f);
        REQUIRE(fields.size() == 13);
        const auto& jr = json_rows[row_idx];
        CHECK(fields[2] == jr.at("marker").get<std::string>());
        auto check_num = [&](const std::string& cell, const char* key) {
            const auto& jv = jr.at(key);
            if (cell == "NaN") {
                CHECK(jv.is_null());
            } else if (cell == "inf" || cell == "-inf") {
                CHECK(jv.get<std::string>() == cell);
            } else {
                CHECK(jv.get<double>() == std::stod(cell));
            }
        };
        check_num(fields[3], "mean_a");
        check_num(fields[4], "mean_b");
        check_num(fields[5], "var_a");
        check_num(fields[6], "var_b");
        check_num(fields[9], "t");
        check_num(fields[10], "df");
        check_num(fields[11], "p");
        CHECK(fields[12] == jr.at("verdict").get<std::string>());
        ++row_idx;
    }
    CHECK(row_idx == json_rows.size());
}

TEST_CASE("perfect separation reports success with a floored p in the table") {
    Scratch s;
    CompareOptions opt;
    opt.scores_path = s.file("scores.csv", kSeparatedScores);
    opt.markers_path = s.file("markers.csv", kSeparatedMarkers);
    opt.ks = {2};

    opt.format = ReportFormat::table;
    auto table = run_compare(opt);
    CHECK(table.find("<1e-16") != std::string::npos);
    CHECK(table.find(" S") != std::string::npos);

    // The same p renders as a plain zero in csv, with the infinite
    // statistic spelled out.
    opt.format = ReportFormat::csv;
    auto csv_text = run_compare(opt);
    CHECK(csv_text.find("top,2,CombinedMarkerScore,-1,1,0,0,2,2,-inf,NaN,0,S") !=
          std::string::npos);
    CHECK(csv_text.find("movers,2,CombinedMarkerScore,1,-1,0,0,2,2,inf,NaN,0,S") !=
          std::string::npos);
}

TEST_CASE("an empty marker file leaves every verdict undetermined") {
    Scratch s;
    CompareOptions opt;
    opt.scores_path = s.file("scores.csv", kSeparatedScores);
    opt.markers_path = s.file("markers.csv", "sample_id,marker,verdict\n");
    opt.ks = {2};
    opt.format = ReportFormat::csv;
    auto csv_text = run_compare(opt);
    std::istringstream lines(csv_text);
    std::string line;
    std::getline(lines, line); // header
    std::size_t rows = 0;
    while (std::getline(lines, line)) {
        CHECK(line.substr(line.size() - 2) == ",U");
        ++rows;
    }
    CHECK(rows == 3); // one combined row per kind, no marker rows
}

TEST_CASE("unmatched marker samples follow the chosen policy") {
    Scratch s;
    CompareOptions opt;
    opt.scores_path = s.file("scores.csv", kSeparatedScores);
    opt.markers_path = s.file("markers.csv",
                              "sample_id,marker,verdict\n"
                              "s1,m,-1\n"
                              "stranger,m,1\n");
    opt.ks = {2};

    opt.policy = UnmatchedPolicy::strict;
    std::ostringstream out, err;
    CHECK_THROWS_WITH_AS(cmd_compare(opt, out, err), doctest::Contains("stranger"),
                         validation_error);

    opt.policy = UnmatchedPolicy::abstain;
    std::string err_text;
    run_compare(opt, &err_text);
    CHECK(err_text.find("warning") != std::string::npos);
    CHECK(err_text.find("1") != std::string::npos);
}

TEST_CASE("oversized k values are rejected before any test runs") {
    auto opt = toy_options(ReportFormat::table);
    opt.ks = {10};
    std::ostringstream out, err;
    CHECK_THROWS_AS(cmd_compare(opt, out, err), domain_error);
}

TEST_CASE("reports can be written to a file atomically") {
    Scratch s;
    auto opt = toy_options(ReportFormat::csv);
    opt.out_path = s.dir / "report.csv";
    std::string err_text;
    auto streamed = run_compare(opt, &err_text);
    CHECK(streamed.empty()); // the report went to the file, not the stream
    CHECK(slurp(*opt.out_path) == slurp("data/toy_report.csv"));
}

TEST_CASE("sweep configs load, validate and reject unknown keys") {
    Scratch s;
    auto good = s.file("sweep.conf",
                       "# tiny sweep\n"
                       "n = 2000\n"
                       "k = 40\n"
                       "seed = 7\n"
                       "alphas = 0.3,0.9\n"
                       "betas = 0.5\n"
                       "repeats = 2\n"
                       "level = 0.05\n");
    auto grid = load_sweep_config(good);
    CHECK(grid.alphas == std::vector<double>{0.3, 0.9});
    CHECK(grid.betas == std::vector<double>{0.5});
    CHECK(grid.repeats == 2);
    CHECK(grid.base.n == 2000);
    CHECK(grid.base.seed == 7);

    auto unknown = s.file("bad.conf",
                          "alphas = 0.5\nbetas = 0.5\nrepeats = 1\ntypo_key = 3\n");
    CHECK_THROWS_WITH_AS(load_sweep_config(unknown), doctest::Contains("typo_key"),
                         format_error);

    auto missing = s.file("missing.conf", "alphas = 0.5\nrepeats = 1\n");
    CHECK_THROWS_WITH_AS(load_sweep_config(missing), doctest::Contains("betas"),
                         format_error);

    auto out_of_range = s.file("range.conf",
                               "alphas = 1.5\nbetas = 0.5\nrepeats = 1\n");
    CHECK_THROWS_AS(load_sweep_config(out_of_range), domain_error);
}

TEST_CASE("simulation runs are deterministic end to end") {
    Scratch s;
    auto conf = s.file("sweep.conf",
                       "n = 2000\n"
                       "k = 40\n"
                       "seed = 11\n"
                       "alphas = 0.2,0.8\n"
                       "betas = 0.6\n"
                       "repeats = 2\n");
    SimulateOptions opt;
    opt.config_path = conf;
    opt.out_path = s.dir / "sweep.csv";
    opt.threads = 2;

    std::ostringstream err1;
    cmd_simulate(opt, err1);
    auto first = slurp(opt.out_path);

    std::ostringstream err2;
    cmd_simulate(opt, err2);
    CHECK(slurp(opt.out_path) == first);

    // Shape: header plus 2 cells x 3 tests.
    std::istringstream lines(first);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "alpha,beta,test,s_count,f_count,u_count");
    std::vector<std::string> rows;
    while (std::getline(lines, line)) rows.push_back(line);
    REQUIRE(rows.size() == 6);
    CHECK(rows[0].rfind("0.2,0.6,top,", 0) == 0);
    CHECK(rows[1].rfind("0.2,0.6,bottom,", 0) == 0);
    CHECK(rows[2].rfind("0.2,0.6,movers,", 0) == 0);
    CHECK(rows[3].rfind("0.8,0.6,top,", 0) == 0);

    // Tallies in each row sum to the repeat count.
    for (const auto& r : rows) {
        auto tail = r.substr(r.find("top,") != std::string::npos
                                 ? r.find("top,") + 4
                                 : (r.find("bottom,") != std::string::npos
                                        ? r.find("bottom,") + 7
                                        : r.find("movers,") + 7));
        int a, b, c;
        CHECK(std::sscanf(tail.c_str(), "%d,%d,%d", &a, &b, &c) == 3);
        CHECK(a + b + c == 2);
    }

    // Progress went to the error stream.
    CHECK(err1.str().find("2/2") != std::string::npos);
}

TEST_CASE("voting outputs render plain numbers and CSV tables") {
    CHECK(voting_accuracy_output(3, 0.6) == "0.648\n");
    CHECK(voting_accuracy_output(1, 0.8) == "0.8\n");
    std::vector<double> betas{0.5, 0.5};
    CHECK(voting_coverage_output(betas) == "0.75\n");
    std::vector<double> hetero{1.0, 0.0, 1.0};
    CHECK(voting_accuracy_hetero_output(hetero) == "1\n");

    std::vector<std::size_t> ks{1, 3};
    std::vector<double> alphas{0.6};
    auto curves = voting_curves_csv(ks, alphas);
    CHECK(curves == "k,alpha,p_correct\n1,0.6,0.6\n3,0.6,0.648\n");

    std::vector<double> base{1.0, 1.0, 1.0};
    std::vector<double> cand{0.5};
    auto marginal = voting_marginal_csv(base, cand);
    CHECK(marginal == "alpha_new,p_correct_with,p_correct_without\n0.5,1,1\n");
}

TEST_CASE("number formatting is stable at ten significant digits") {
    CHECK(format_number(0.5) == "0.5");
    CHECK(format_number(1.0 / 3.0) == "0.3333333333");
    CHECK(format_number(0.0) == "0");
    CHECK(format_number(-2.0) == "-2");
    CHECK(format_number(std::nan("")) == "NaN");
    CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(format_number(1.23456789012e-17) == "1.23456789e-17");
}

TEST_CASE("list and flag parsing reject malformed input by name") {
    CHECK(parse_double_list("0.1,0.2", "xs") == std::vector<double>{0.1, 0.2});
    CHECK_THROWS_WITH_AS(parse_double_list("0.1,,0.2", "xs"), doctest::Contains("xs"),
                         format_error);
    CHECK_THROWS_AS(parse_double_list("", "xs"), format_error);
    CHECK_THROWS_AS(parse_double_list("0.1,zebra", "xs"), format_error);

    CHECK(parse_size_list("5,2", "ks") == std::vector<std::size_t>{5, 2});
    CHECK_THROWS_AS(parse_size_list("5,-2", "ks"), format_error);
    CHECK_THROWS_AS(parse_size_list("5.5", "ks"), format_error);

    auto kinds = parse_kind_set("top,movers");
    CHECK(kinds.top);
    CHECK_FALSE(kinds.bottom);
    CHECK(kinds.movers);
    CHECK_THROWS_AS(parse_kind_set("sideways"), format_error);

    CHECK(parse_unmatched_policy("strict") == UnmatchedPolicy::strict);
    CHECK(parse_unmatched_policy("abstain") == UnmatchedPolicy::abstain);
    CHECK_THROWS_AS(parse_unmatched_policy("ignore"), format_error);

    CHECK(report_format_from_string("json") == ReportFormat::json);
    CHECK_THROWS_AS(report_format_from_string("xml"), domain_error);
}
