#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "capsim/coded.hpp"
#include "capsim/experiments.hpp"
#include "doctest.h"

using namespace capsim;
using doctest::Approx;

namespace {

namespace fs = std::filesystem;

fs::path work_dir() {
    const fs::path dir = fs::temp_directory_path() / "capsim_unit_experiments";
    fs::create_directories(dir);
    return dir;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

fs::path write_json(const std::string& name, const std::string& body) {
    const fs::path path = work_dir() / name;
    write_text_file(path.string(), body);
    return path;
}

std::vector<std::string> data_lines(const std::string& csv) {
    std::vector<std::string> out;
    std::istringstream in(csv);
    std::string line;
    while (std::getline(in, line))
        if (!line.empty() && line[0] != '#') out.push_back(line);
    return out;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string field;
    while (std::getline(in, field, ',')) out.push_back(field);
    return out;
}

}  // namespace

TEST_SUITE("experiments") {

TEST_CASE("json scenarios map onto every config field") {
    const fs::path path = write_json("full.json", R"({
  "workers": [5, 15],
  "rewards": 4,
  "structure": ["single", "geometric:0.8"],
  "sigma": 2.0,
  "theta": 2.0,
  "kappa": 1e-20,
  "cycles": 1e10,
  "cost_mode": "table1",
  "valuation": {"kind": "uniform", "lo": 0.0, "hi": 2.0},
  "grid": 501,
  "seed": 42,
  "rounds": 250,
  "fixed_delay": 0.5,
  "out": "somewhere.csv"
})");
    const ScenarioConfig sc = load_scenario(path.string());
    CHECK(sc.workers == std::vector<int>{5, 15});
    CHECK(sc.rewards == std::vector<int>{4});
    CHECK(sc.structures == std::vector<std::string>{"single", "geometric:0.8"});
    CHECK(sc.sigma == 2.0);
    CHECK(sc.theta == 2.0);
    CHECK(sc.kappa == 1e-20);
    CHECK(sc.cycles == 1e10);
    CHECK(sc.valuation_hi == 2.0);
    CHECK(sc.grid == 501);
    CHECK(sc.seed == 42);
    CHECK(sc.rounds == 250);
    CHECK(sc.fixed_delay == 0.5);
    CHECK(sc.out == "somewhere.csv");
}

TEST_CASE("json loader pinpoints unknown keys and bad types by line") {
    const fs::path unknown = write_json("unknown.json", R"({
  "workers": 5,
  "worker_count": 3
})");
    CHECK_THROWS_WITH_AS(load_scenario(unknown.string()),
                         doctest::Contains("unknown.json:3"),
                         std::invalid_argument);

    const fs::path bad_type = write_json("badtype.json", R"({
  "workers": "five"
})");
    CHECK_THROWS_WITH_AS(load_scenario(bad_type.string()),
                         doctest::Contains("badtype.json:2"),
                         std::invalid_argument);

    const fs::path broken = write_json("broken.json", "{\n  \"workers\": 5,\n}\n");
    CHECK_THROWS_WITH_AS(load_scenario(broken.string()),
                         doctest::Contains("broken.json:3"),
                         std::invalid_argument);

    const fs::path negative_seed = write_json("negseed.json", R"({
  "seed": -4
})");
    CHECK_THROWS_AS(load_scenario(negative_seed.string()), std::invalid_argument);

    const fs::path bad_valuation = write_json("badval.json", R"({
  "valuation": {"kind": "uniform", "low": 0.0}
})");
    CHECK_THROWS_AS(load_scenario(bad_valuation.string()), std::invalid_argument);

    CHECK_THROWS_AS(load_scenario((work_dir() / "missing.json").string()),
                    std::invalid_argument);
}

TEST_CASE("cost modes resolve to the advertised parameters") {
    ScenarioConfig sc;
    sc.cost_mode = "normalized";
    const CostModel normalized = resolved_cost(sc);
    CHECK(normalized.theta == 1.0);
    CHECK(normalized.kappa == 1.0);
    CHECK(normalized.cycles == 1.0);

    sc.cost_mode = "table1";
    const CostModel hw = resolved_cost(sc);
    CHECK(hw.theta == 1.0);
    CHECK(hw.kappa == 1e-25);
    CHECK(hw.cycles == 5e12);

    sc.cost_mode = "bogus";
    CHECK_THROWS_AS(resolved_cost(sc), std::invalid_argument);
}

TEST_CASE("auction configs reject unsupported valuations and oversized ladders") {
    ScenarioConfig sc;
    sc.cost_mode = "normalized";
    CHECK_NOTHROW(make_auction_config(sc, 5, 1, "single"));
    sc.valuation_kind = "gauss";
    CHECK_THROWS_AS(make_auction_config(sc, 5, 1, "single"), std::invalid_argument);
    sc.valuation_kind = "uniform";
    CHECK_THROWS_AS(make_auction_config(sc, 3, 4, "single"), std::invalid_argument);
    CHECK_THROWS_AS(make_auction_config(sc, 5, 4, "mystery"), std::invalid_argument);
}

TEST_CASE("bid curve runs write one nondecreasing series per sweep cell") {
    ScenarioConfig sc;
    sc.workers = {5, 15};
    sc.rewards = {1};
    sc.cost_mode = "normalized";
    sc.grid = 101;
    sc.out = (work_dir() / "curves.csv").string();
    sc.svg = (work_dir() / "curves.svg").string();
    run_bid_curve(sc);

    const std::string csv = read_file(sc.out);
    const auto lines = data_lines(csv);
    REQUIRE(lines.size() == std::size_t(1 + 2 * 101));
    CHECK(lines[0] == "series,valuation,bid");
    double prev = -1.0;
    std::string prev_series;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = split_fields(lines[i]);
        REQUIRE(fields.size() == 3);
        const double bid = std::stod(fields[2]);
        if (fields[0] != prev_series) prev = -1.0;
        CHECK(bid >= prev);
        prev = bid;
        prev_series = fields[0];
    }

    const std::string svg = read_file(sc.svg);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("polyline") != std::string::npos);
}

TEST_CASE("bid curve output is byte-identical across runs and exec modes") {
    ScenarioConfig sc;
    sc.workers = {10};
    sc.structures = {"geometric:0.8"};
    sc.rewards = {4};
    sc.cost_mode = "normalized";
    sc.grid = 101;
    sc.out = (work_dir() / "det_a.csv").string();
    run_bid_curve(sc, Exec::Parallel);
    const std::string first = read_file(sc.out);
    sc.out = (work_dir() / "det_b.csv").string();
    run_bid_curve(sc, Exec::Serial);
    CHECK(first == read_file(sc.out));
}

TEST_CASE("reward comparison tabulates every structure once") {
    ScenarioConfig sc;
    sc.workers = {5};
    sc.rewards = {4};
    sc.structures = {"single", "homogeneous", "arithmetic:0.05", "geometric:0.8"};
    sc.cost_mode = "normalized";
    sc.grid = 201;
    sc.rounds = 500;
    sc.out = (work_dir() / "compare.csv").string();
    run_reward_compare(sc);

    const auto lines = data_lines(read_file(sc.out));
    REQUIRE(lines.size() == 5);
    CHECK(lines[0] ==
          "structure,quadrature_utility,simplified_utility,mc_mean,mc_stderr,"
          "top_bid,wta_diffs");
    CHECK(split_fields(lines[1])[0] == "single");
    // the single-prize ladder has transfer-blocked pairs reported as na
    CHECK(lines[1].find(":na") != std::string::npos);
    // homogeneous prizes block every transfer
    const auto homog = split_fields(lines[2]);
    CHECK(homog[0] == "homogeneous");
    const auto arith = split_fields(lines[3]);
    REQUIRE(arith.size() == 7);
    CHECK(arith[6].find("na") == std::string::npos);

    ScenarioConfig missing = sc;
    missing.structures.clear();
    CHECK_THROWS_AS(run_reward_compare(missing), std::invalid_argument);
    ScenarioConfig no_out = sc;
    no_out.out.clear();
    CHECK_THROWS_AS(run_reward_compare(no_out), std::invalid_argument);
}

TEST_CASE("single-prize ladders omit the transfer column content when K=1") {
    ScenarioConfig sc;
    sc.workers = {5};
    sc.rewards = {1};
    sc.structures = {"single"};
    sc.cost_mode = "normalized";
    sc.grid = 201;
    sc.rounds = 200;
    sc.out = (work_dir() / "compare_k1.csv").string();
    run_reward_compare(sc);
    const auto lines = data_lines(read_file(sc.out));
    REQUIRE(lines.size() == 2);
    const auto fields = split_fields(lines[1]);
    CHECK(fields.size() == 6);  // trailing wta column is empty
}

TEST_CASE("simulation runs replay byte-identically for a fixed seed") {
    ScenarioConfig sc;
    sc.workers = {6};
    sc.rewards = {3};
    sc.structures = {"geometric:0.5"};
    sc.cost_mode = "normalized";
    sc.grid = 201;
    sc.rounds = 300;
    sc.seed = 97;
    sc.out = (work_dir() / "sim_a.csv").string();
    run_simulate(sc, Exec::Parallel);
    const std::string first = read_file(sc.out);
    sc.out = (work_dir() / "sim_b.csv").string();
    run_simulate(sc, Exec::Serial);
    CHECK(first == read_file(sc.out));

    const auto lines = data_lines(first);
    REQUIRE(lines.size() == std::size_t(1 + 300));
    CHECK(lines[0] == "round,coded_time,uncoded_time,ratio,master_utility_sample");
    CHECK(split_fields(lines[1])[0] == "1");
    CHECK(split_fields(lines[300])[0] == "300");
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = split_fields(lines[i]);
        REQUIRE(fields.size() == 5);
        CHECK(std::stod(fields[3]) >= 1.0);  // uncoded waits at least as long
    }
    CHECK(first.find("# speedup=") != std::string::npos);
    CHECK(first.find("# mc_master_utility=") != std::string::npos);
    CHECK(first.find("# quadrature_master_utility=") != std::string::npos);
}

TEST_CASE("simulation degenerates to ratio one when every worker wins") {
    ScenarioConfig sc;
    sc.workers = {4};
    sc.rewards = {4};
    sc.structures = {"geometric:0.5"};
    sc.cost_mode = "normalized";
    sc.grid = 201;
    sc.rounds = 50;
    sc.out = (work_dir() / "sim_eq.csv").string();
    run_simulate(sc);
    const auto lines = data_lines(read_file(sc.out));
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = split_fields(lines[i]);
        CHECK(fields[1] == fields[2]);  // coded and uncoded times coincide
        CHECK(std::stod(fields[3]) == 1.0);
    }
}

TEST_CASE("simulation footer estimate brackets the quadrature value") {
    ScenarioConfig sc;
    sc.workers = {5};
    sc.rewards = {1};
    sc.structures = {"single"};
    sc.cost_mode = "normalized";
    sc.grid = 501;
    sc.rounds = 20000;
    sc.seed = 11;
    sc.out = (work_dir() / "sim_mc.csv").string();
    run_simulate(sc);
    const std::string csv = read_file(sc.out);

    const auto grab = [&](const std::string& key) {
        const auto pos = csv.find(key);
        REQUIRE(pos != std::string::npos);
        return std::stod(csv.substr(pos + key.size()));
    };
    const double mc = grab("# mc_master_utility=");
    const double se = grab("mc_std_error=");
    const double quad = grab("# quadrature_master_utility=");
    CHECK(se > 0.0);
    CHECK(std::abs(mc - quad) <= 3.0 * se);
}

TEST_CASE("the coded demo decodes exactly and reports its settings") {
    CodedDemoOptions opt;  // 6 workers, 2 stragglers, threshold 4
    const std::string report = run_coded_demo(opt);
    CHECK(report.find("field modulus: 65537") != std::string::npos);
    CHECK(report.find("recovery threshold 4") != std::string::npos);
    CHECK(report.find("stragglers: 5, 6") != std::string::npos);
    CHECK(report.find("decoded exactly: true") != std::string::npos);

    CodedDemoOptions quiet = opt;
    quiet.stragglers = 0;
    CHECK(run_coded_demo(quiet).find("stragglers: none") != std::string::npos);

    CodedDemoOptions trivial;
    trivial.m = 1;
    trivial.n = 1;
    trivial.workers = 1;
    trivial.stragglers = 0;
    trivial.shared_dim = 2;
    trivial.cols_a = 2;
    trivial.cols_b = 2;
    CHECK(run_coded_demo(trivial).find("decoded exactly: true") != std::string::npos);

    CodedDemoOptions starved = opt;
    starved.stragglers = 3;
    CHECK_THROWS_AS(run_coded_demo(starved), NotDecodableError);
}

TEST_CASE("figure presets emit csv and svg pairs for both cost modes") {
    const fs::path dir_a = work_dir() / "figs_a";
    const fs::path dir_b = work_dir() / "figs_b";
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
    run_figures("fig1", dir_a.string(), 1);
    run_figures("fig1", dir_b.string(), 1);

    for (const char* name :
         {"fig1_normalized.csv", "fig1_table1.csv", "fig1_normalized.svg",
          "fig1_table1.svg"}) {
        CHECK(fs::exists(dir_a / name));
        CHECK(read_file(dir_a / name) == read_file(dir_b / name));
    }
    CHECK_THROWS_AS(run_figures("fig9", dir_a.string(), 1), std::invalid_argument);
}

}  // TEST_SUITE
