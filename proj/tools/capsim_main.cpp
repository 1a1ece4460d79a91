#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "capsim/coded.hpp"
#include "capsim/experiments.hpp"

namespace {

struct SharedFlags {
    std::optional<std::string> config;
    std::optional<int> workers;
    std::optional<int> rewards;
    std::vector<std::string> structures;
    std::optional<double> sigma;
    std::optional<double> theta;
    std::optional<double> kappa;
    std::optional<double> cycles;
    std::optional<std::string> cost_mode;
    std::optional<int> grid;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::string> svg;
    std::optional<int> rounds;
    std::optional<double> delay;
};

void add_shared_options(CLI::App* cmd, SharedFlags& f) {
    cmd->add_option("--config", f.config, "JSON scenario file; flags override it");
    cmd->add_option("--workers", f.workers, "number of workers I");
    cmd->add_option("--rewards", f.rewards, "number of prizes K");
    cmd->add_option("--structure", f.structures,
                    "reward structure: single, homogeneous, arithmetic:<gamma>, "
                    "geometric:<eta> (repeatable)");
    cmd->add_option("--sigma", f.sigma, "total reward budget");
    cmd->add_option("--theta", f.theta, "unit cost of computational energy");
    cmd->add_option("--kappa", f.kappa, "effective switch coefficient");
    cmd->add_option("--cycles", f.cycles, "CPU cycles per subtask");
    cmd->add_option("--cost-mode", f.cost_mode, "table1 or normalized");
    cmd->add_option("--grid", f.grid, "bid tabulation grid size");
    cmd->add_option("--seed", f.seed, "rng seed");
    cmd->add_option("--out", f.out, "output CSV path");
}

capsim::ScenarioConfig resolve(const SharedFlags& f, const std::string& default_out) {
    capsim::ScenarioConfig sc;
    if (f.config) sc = capsim::load_scenario(*f.config);
    if (f.workers) sc.workers = {*f.workers};
    if (f.rewards) sc.rewards = {*f.rewards};
    if (!f.structures.empty()) sc.structures = f.structures;
    if (f.sigma) sc.sigma = *f.sigma;
    if (f.theta) sc.theta = *f.theta;
    if (f.kappa) sc.kappa = *f.kappa;
    if (f.cycles) sc.cycles = *f.cycles;
    if (f.cost_mode) sc.cost_mode = *f.cost_mode;
    if (f.grid) sc.grid = *f.grid;
    if (f.seed) sc.seed = *f.seed;
    if (f.out) sc.out = *f.out;
    if (sc.out.empty()) sc.out = default_out;
    if (f.svg) sc.svg = *f.svg;
    if (f.rounds) sc.rounds = *f.rounds;
    if (f.delay) sc.fixed_delay = *f.delay;
    return sc;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"all-pay auction incentives for coded distributed matrix multiplication"};
    app.require_subcommand(1);
    bool serial = false;
    app.add_flag("--serial", serial, "single-threaded execution");
    const auto exec = [&] {
        return serial ? capsim::Exec::Serial : capsim::Exec::Parallel;
    };

    SharedFlags curve_flags;
    CLI::App* curve = app.add_subcommand("bid-curve", "equilibrium bid curve CSV/SVG");
    add_shared_options(curve, curve_flags);
    curve->add_option("--svg", curve_flags.svg, "also render an SVG chart");
    curve->callback([&] {
        capsim::run_bid_curve(resolve(curve_flags, "bid_curve.csv"), exec());
    });

    SharedFlags compare_flags;
    CLI::App* compare =
        app.add_subcommand("reward-compare", "compare reward structures");
    add_shared_options(compare, compare_flags);
    compare->add_option("--rounds", compare_flags.rounds, "Monte Carlo rounds");
    compare->callback([&] {
        capsim::run_reward_compare(resolve(compare_flags, "reward_compare.csv"),
                                   exec());
    });

    capsim::CodedDemoOptions demo;
    std::optional<std::string> demo_out;
    CLI::App* coded = app.add_subcommand(
        "coded-demo", "encode, compute with stragglers, decode, verify");
    coded->add_option("--workers", demo.workers, "number of workers I");
    coded->add_option("--m", demo.m, "column blocks of A");
    coded->add_option("--n", demo.n, "column blocks of B");
    coded->add_option("--field", demo.field_modulus, "prime field modulus");
    coded->add_option("--stragglers", demo.stragglers,
                      "how many highest-id workers never respond");
    coded->add_option("--rows", demo.shared_dim, "shared row count of A and B");
    coded->add_option("--cols-a", demo.cols_a, "columns of A");
    coded->add_option("--cols-b", demo.cols_b, "columns of B");
    coded->add_option("--seed", demo.seed, "rng seed");
    coded->add_option("--out", demo_out, "also write the report to a file");
    coded->callback([&] {
        const std::string report = capsim::run_coded_demo(demo, exec());
        std::cout << report;
        if (demo_out) capsim::write_text_file(*demo_out, report);
    });

    SharedFlags sim_flags;
    CLI::App* simulate =
        app.add_subcommand("simulate", "per-round straggler timeline CSV");
    add_shared_options(simulate, sim_flags);
    simulate->add_option("--rounds", sim_flags.rounds, "number of rounds");
    simulate->add_option("--delay", sim_flags.delay, "fixed transmission delay");
    simulate->callback([&] {
        capsim::run_simulate(resolve(sim_flags, "simulate.csv"), exec());
    });

    std::string preset = "all";
    std::string fig_dir = "figures";
    std::uint64_t fig_seed = 1;
    CLI::App* figures = app.add_subcommand("figures", "render the figure presets");
    figures->add_option("--preset", preset, "fig1..fig5 or all");
    figures->add_option("--out", fig_dir, "output directory");
    figures->add_option("--seed", fig_seed, "rng seed");
    figures->callback(
        [&] { capsim::run_figures(preset, fig_dir, fig_seed, exec()); });

    // lets --serial appear after the subcommand name
    for (CLI::App* sub : app.get_subcommands([](CLI::App*) { return true; }))
        sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
