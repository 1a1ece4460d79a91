#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "capsim/auction.hpp"
#include "capsim/exec.hpp"
#include "capsim/sim.hpp"

namespace capsim {

/// One experiment description, as assembled from CLI flags or a JSON config.
/// workers / rewards / structures with more than one entry sweep that
/// dimension; the cross product defines the series of a run.
struct ScenarioConfig {
    std::vector<int> workers = {5};
    std::vector<int> rewards = {1};
    std::vector<std::string> structures;

    double sigma = 1.0;
    double theta = 1.0;
    double kappa = 1e-25;
    double cycles = 5e12;
    std::string cost_mode = "table1";  // or "normalized": theta=kappa=cycles=1

    std::string valuation_kind = "uniform";
    double valuation_lo = 0.0;
    double valuation_hi = 1.0;

    int grid = 1001;
    std::uint64_t seed = 1;
    int rounds = 1000;
    double fixed_delay = 0.0;

    std::string out;  // CSV path
    std::string svg;  // optional SVG path (bid curves only)
};

/// Strict JSON loader: unknown keys, wrong types and malformed numbers are
/// rejected with file:line diagnostics (std::invalid_argument).
ScenarioConfig load_scenario(const std::string& path);

/// Writes content to path, creating parent directories. Throws on I/O failure.
void write_text_file(const std::string& path, const std::string& content);

/// Cost model after applying cost_mode.
CostModel resolved_cost(const ScenarioConfig& scenario);

/// Auction for one sweep cell. Throws invalid_argument on bad parameters.
AuctionConfig make_auction_config(const ScenarioConfig& scenario, int workers,
                                  int rewards, const std::string& structure);

/// Equilibrium bid curves for every sweep cell; CSV to scenario.out, optional
/// SVG to scenario.svg. Every series is checked to be nondecreasing.
void run_bid_curve(const ScenarioConfig& scenario, Exec exec = Exec::Parallel);

/// Per-structure comparison table: quadrature and simplified master
/// utilities, Monte Carlo estimate with standard error, top bid, and the
/// adjacent-prize transfer derivatives.
void run_reward_compare(const ScenarioConfig& scenario, Exec exec = Exec::Parallel);

/// Per-round straggler timeline CSV plus a summary footer.
void run_simulate(const ScenarioConfig& scenario, Exec exec = Exec::Parallel);

struct CodedDemoOptions {
    int m = 2;
    int n = 2;
    int workers = 6;
    int stragglers = 2;  // this many highest-id workers never respond
    std::uint64_t field_modulus = 65537;
    std::size_t shared_dim = 4;  // rows of both matrices
    std::size_t cols_a = 4;
    std::size_t cols_b = 4;
    std::uint64_t seed = 1;
};

/// Runs the full encode / compute / straggle / decode pipeline on random
/// matrices and checks the result against direct multiplication. Returns the
/// textual report. Throws NotDecodableError when too few results survive.
std::string run_coded_demo(const CodedDemoOptions& options, Exec exec = Exec::Parallel);

/// Writes {preset}_{costmode}.csv/.svg pairs into out_dir for preset in
/// fig1..fig5, or all of them for "all".
void run_figures(const std::string& preset, const std::string& out_dir,
                 std::uint64_t seed, Exec exec = Exec::Parallel);

}  // namespace capsim
