#include "capsim/experiments.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "capsim/coded.hpp"
#include "capsim/matrix.hpp"
#include "capsim/svg.hpp"

#include "json.hpp"

namespace capsim {

namespace {

std::string g12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string join_ints(const std::vector<int>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(xs[i]);
    }
    return out;
}

std::string join_strings(const std::vector<std::string>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ',';
        out += xs[i];
    }
    return out;
}

void ensure_parent_dir(const std::string& path) {
    const std::filesystem::path parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
}

std::string config_echo(const std::string& command, const ScenarioConfig& sc) {
    const CostModel cost = resolved_cost(sc);
    std::string s;
    s += "# capsim " + command + "\n";
    s += "# workers=" + join_ints(sc.workers) + "\n";
    s += "# rewards=" + join_ints(sc.rewards) + "\n";
    s += "# structures=" + join_strings(sc.structures) + "\n";
    s += "# sigma=" + g12(sc.sigma) + "\n";
    s += "# cost_mode=" + sc.cost_mode + "\n";
    s += "# theta=" + g12(cost.theta) + " kappa=" + g12(cost.kappa) +
         " cycles=" + g12(cost.cycles) + "\n";
    s += "# valuation=" + sc.valuation_kind + "[" + g12(sc.valuation_lo) + "," +
         g12(sc.valuation_hi) + "]\n";
    s += "# grid=" + std::to_string(sc.grid) + "\n";
    s += "# seed=" + std::to_string(sc.seed) + "\n";
    s += "# rounds=" + std::to_string(sc.rounds) + "\n";
    s += "# fixed_delay=" + g12(sc.fixed_delay) + "\n";
    return s;
}

int line_of_offset(const std::string& raw, std::size_t offset) {
    offset = std::min(offset, raw.size());
    return 1 + static_cast<int>(std::count(raw.begin(),
                                           raw.begin() + static_cast<std::ptrdiff_t>(offset),
                                           '\n'));
}

int line_of_key(const std::string& raw, const std::string& key) {
    const std::size_t pos = raw.find('"' + key + '"');
    if (pos == std::string::npos) return 1;
    return line_of_offset(raw, pos);
}

[[noreturn]] void config_error(const std::string& path, const std::string& raw,
                               const std::string& key, const std::string& message) {
    throw std::invalid_argument(path + ":" + std::to_string(line_of_key(raw, key)) +
                                ": " + message);
}

std::uint64_t cell_seed(std::uint64_t seed, std::uint64_t cell) {
    std::uint64_t s = seed + (cell + 1) * 0x9e3779b97f4a7c15ull;
    return detail::splitmix64(s);
}

struct SweepCell {
    int workers = 0;
    int rewards = 0;
    std::string structure;
    std::string label;
};

std::vector<SweepCell> sweep_cells(const ScenarioConfig& sc,
                                   const std::vector<std::string>& structures) {
    std::vector<SweepCell> cells;
    for (const std::string& structure : structures)
        for (int workers : sc.workers)
            for (int rewards : sc.rewards) {
                SweepCell cell{workers, rewards, structure, ""};
                std::vector<std::string> parts;
                if (structures.size() > 1) parts.push_back(structure);
                if (sc.workers.size() > 1)
                    parts.push_back("I=" + std::to_string(workers));
                if (sc.rewards.size() > 1)
                    parts.push_back("K=" + std::to_string(rewards));
                if (parts.empty()) parts.push_back(structure);
                for (std::size_t i = 0; i < parts.size(); ++i) {
                    if (i) cell.label += ' ';
                    cell.label += parts[i];
                }
                cells.push_back(std::move(cell));
            }
    return cells;
}

}  // namespace

void write_text_file(const std::string& path, const std::string& content) {
    ensure_parent_dir(path);
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open for writing: " + path);
    file << content;
    if (!file) throw std::runtime_error("write failed: " + path);
}

CostModel resolved_cost(const ScenarioConfig& scenario) {
    if (scenario.cost_mode == "normalized") return CostModel{1.0, 1.0, 1.0};
    if (scenario.cost_mode == "table1")
        return CostModel{scenario.theta, scenario.kappa, scenario.cycles};
    throw std::invalid_argument("unknown cost mode '" + scenario.cost_mode +
                                "' (expected table1 or normalized)");
}

AuctionConfig make_auction_config(const ScenarioConfig& scenario, int workers,
                                  int rewards, const std::string& structure) {
    if (scenario.valuation_kind != "uniform")
        throw std::invalid_argument("unknown valuation kind '" +
                                    scenario.valuation_kind + "'");
    AuctionConfig config;
    config.workers = workers;
    config.dist = std::make_shared<UniformValuation>(scenario.valuation_lo,
                                                     scenario.valuation_hi);
    config.cost = resolved_cost(scenario);
    config.schedule = parse_structure(structure, rewards, scenario.sigma);
    config.check();
    return config;
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw std::invalid_argument("cannot open config: " + path);
    std::stringstream buffer;
    buffer << file.rdbuf();
    const std::string raw = buffer.str();

    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(raw);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(path + ":" +
                                    std::to_string(line_of_offset(raw, e.byte)) +
                                    ": " + e.what());
    }
    if (!doc.is_object())
        throw std::invalid_argument(path + ":1: config must be a JSON object");

    static const std::set<std::string> known = {
        "workers", "rewards",   "structure", "sigma",  "theta",
        "kappa",   "cycles",    "cost_mode", "valuation", "grid",
        "seed",    "rounds",    "fixed_delay", "out",  "svg"};
    for (const auto& item : doc.items())
        if (!known.count(item.key()))
            config_error(path, raw, item.key(), "unknown key \"" + item.key() + "\"");

    ScenarioConfig sc;
    sc.structures.clear();

    const auto int_list = [&](const char* key, std::vector<int>& out) {
        const auto& node = doc.at(key);
        out.clear();
        if (node.is_number_integer()) {
            out.push_back(node.get<int>());
        } else if (node.is_array()) {
            for (const auto& e : node) {
                if (!e.is_number_integer())
                    config_error(path, raw, key,
                                 std::string(key) + " entries must be integers");
                out.push_back(e.get<int>());
            }
            if (out.empty())
                config_error(path, raw, key, std::string(key) + " list is empty");
        } else {
            config_error(path, raw, key,
                         std::string(key) + " must be an integer or integer list");
        }
    };
    const auto number = [&](const char* key, double& out) {
        const auto& node = doc.at(key);
        if (!node.is_number())
            config_error(path, raw, key, std::string(key) + " must be a number");
        out = node.get<double>();
    };
    const auto integer = [&](const char* key, int& out) {
        const auto& node = doc.at(key);
        if (!node.is_number_integer())
            config_error(path, raw, key, std::string(key) + " must be an integer");
        out = node.get<int>();
    };
    const auto string_field = [&](const char* key, std::string& out) {
        const auto& node = doc.at(key);
        if (!node.is_string())
            config_error(path, raw, key, std::string(key) + " must be a string");
        out = node.get<std::string>();
    };

    if (doc.contains("workers")) int_list("workers", sc.workers);
    if (doc.contains("rewards")) int_list("rewards", sc.rewards);
    if (doc.contains("structure")) {
        const auto& node = doc.at("structure");
        if (node.is_string()) {
            sc.structures = {node.get<std::string>()};
        } else if (node.is_array()) {
            for (const auto& e : node) {
                if (!e.is_string())
                    config_error(path, raw, "structure",
                                 "structure entries must be strings");
                sc.structures.push_back(e.get<std::string>());
            }
        } else {
            config_error(path, raw, "structure",
                         "structure must be a string or string list");
        }
    }
    if (doc.contains("sigma")) number("sigma", sc.sigma);
    if (doc.contains("theta")) number("theta", sc.theta);
    if (doc.contains("kappa")) number("kappa", sc.kappa);
    if (doc.contains("cycles")) number("cycles", sc.cycles);
    if (doc.contains("cost_mode")) {
        string_field("cost_mode", sc.cost_mode);
        if (sc.cost_mode != "table1" && sc.cost_mode != "normalized")
            config_error(path, raw, "cost_mode",
                         "cost_mode must be table1 or normalized");
    }
    if (doc.contains("valuation")) {
        const auto& node = doc.at("valuation");
        if (!node.is_object())
            config_error(path, raw, "valuation", "valuation must be an object");
        static const std::set<std::string> vknown = {"kind", "lo", "hi"};
        for (const auto& item : node.items())
            if (!vknown.count(item.key()))
                config_error(path, raw, item.key(),
                             "unknown valuation key \"" + item.key() + "\"");
        if (node.contains("kind")) {
            if (!node.at("kind").is_string())
                config_error(path, raw, "kind", "valuation kind must be a string");
            sc.valuation_kind = node.at("kind").get<std::string>();
        }
        if (node.contains("lo")) {
            if (!node.at("lo").is_number())
                config_error(path, raw, "lo", "valuation lo must be a number");
            sc.valuation_lo = node.at("lo").get<double>();
        }
        if (node.contains("hi")) {
            if (!node.at("hi").is_number())
                config_error(path, raw, "hi", "valuation hi must be a number");
            sc.valuation_hi = node.at("hi").get<double>();
        }
    }
    if (doc.contains("grid")) integer("grid", sc.grid);
    if (doc.contains("seed")) {
        const auto& node = doc.at("seed");
        if (!node.is_number_unsigned())
            config_error(path, raw, "seed", "seed must be a nonnegative integer");
        sc.seed = node.get<std::uint64_t>();
    }
    if (doc.contains("rounds")) integer("rounds", sc.rounds);
    if (doc.contains("fixed_delay")) number("fixed_delay", sc.fixed_delay);
    if (doc.contains("out")) string_field("out", sc.out);
    if (doc.contains("svg")) string_field("svg", sc.svg);
    return sc;
}

void run_bid_curve(const ScenarioConfig& scenario, Exec exec) {
    if (scenario.out.empty())
        throw std::invalid_argument("bid-curve needs an output path");
    const std::vector<std::string> structures =
        scenario.structures.empty() ? std::vector<std::string>{"single"}
                                    : scenario.structures;
    const std::vector<SweepCell> cells = sweep_cells(scenario, structures);

    std::string csv = config_echo("bid-curve", scenario);
    csv += "series,valuation,bid\n";
    std::vector<ChartSeries> chart;
    for (const SweepCell& cell : cells) {
        const AuctionConfig config =
            make_auction_config(scenario, cell.workers, cell.rewards, cell.structure);
        const BidFunction bids =
            tabulate_bid_function(config, scenario.grid, exec);
        ChartSeries series;
        series.label = cell.label;
        series.x = bids.grid;
        series.y.reserve(bids.grid.size());
        for (double acc : bids.accumulator)
            series.y.push_back(config.cost.inverse_cost(acc));
        for (std::size_t j = 1; j < series.y.size(); ++j)
            if (series.y[j] < series.y[j - 1])
                throw std::runtime_error("bid curve series '" + cell.label +
                                         "' is not nondecreasing");
        for (std::size_t j = 0; j < series.x.size(); ++j)
            csv += cell.label + "," + g12(series.x[j]) + "," + g12(series.y[j]) + "\n";
        chart.push_back(std::move(series));
    }
    write_text_file(scenario.out, csv);
    if (!scenario.svg.empty()) {
        ensure_parent_dir(scenario.svg);
        write_line_chart(scenario.svg,
                         "equilibrium bid curves [" + scenario.cost_mode + "]",
                         "valuation", "CPU power (model units)", chart);
    }
}

void run_reward_compare(const ScenarioConfig& scenario, Exec exec) {
    if (scenario.out.empty())
        throw std::invalid_argument("reward-compare needs an output path");
    if (scenario.structures.empty())
        throw std::invalid_argument("reward-compare needs at least one structure");
    const int workers = scenario.workers.front();
    const int rewards = scenario.rewards.front();

    std::string csv = config_echo("reward-compare", scenario);
    csv += "structure,quadrature_utility,simplified_utility,mc_mean,mc_stderr,"
           "top_bid,wta_diffs\n";
    for (std::size_t cell = 0; cell < scenario.structures.size(); ++cell) {
        const std::string& structure = scenario.structures[cell];
        const AuctionConfig config =
            make_auction_config(scenario, workers, rewards, structure);
        const BidFunction bids = tabulate_bid_function(config, scenario.grid, exec);
        const double quad = master_utility_order_stats(config, bids);
        const double simplified = master_utility_simplified(config, bids);
        const MonteCarloStats mc = estimate_master_utility(
            config, bids, scenario.rounds, cell_seed(scenario.seed, cell), exec);
        std::string wta_text;
        if (config.num_prizes() >= 2) {
            const WtaReport wta = wta_local_test(config);
            for (std::size_t i = 0; i < wta.differences.size(); ++i) {
                if (i) wta_text += ';';
                const WtaDifference& d = wta.differences[i];
                wta_text += std::to_string(d.k) + ":" +
                            (d.feasible ? g12(d.value) : std::string("na"));
            }
        }
        csv += structure + "," + g12(quad) + "," + g12(simplified) + "," +
               g12(mc.mean) + "," + g12(mc.std_error) + "," + g12(bids.max_bid()) +
               "," + wta_text + "\n";
    }
    write_text_file(scenario.out, csv);
}

void run_simulate(const ScenarioConfig& scenario, Exec exec) {
    if (scenario.out.empty())
        throw std::invalid_argument("simulate needs an output path");
    if (scenario.rounds < 1)
        throw std::invalid_argument("simulate needs at least one round");
    const std::string structure =
        scenario.structures.empty() ? "single" : scenario.structures.front();
    const AuctionConfig config = make_auction_config(
        scenario, scenario.workers.front(), scenario.rewards.front(), structure);
    CompletionModel model;
    model.cycles = config.cost.cycles;
    model.fixed_delay = scenario.fixed_delay;
    model.check();
    const BidFunction bids = tabulate_bid_function(config, scenario.grid, exec);

    struct RoundRow {
        double coded = 0.0, uncoded = 0.0, utility = 0.0;
    };
    std::vector<RoundRow> rows(static_cast<std::size_t>(scenario.rounds));
    const auto one = [&](int r) {
        Rng rng = Rng::stream(scenario.seed, static_cast<std::uint64_t>(r));
        const SimulationOutcome outcome = run_round(config, model, bids, rng);
        rows[static_cast<std::size_t>(r)] = {outcome.coded_completion_time,
                                             outcome.uncoded_completion_time,
                                             outcome.master_utility_sample};
    };
    if (exec == Exec::Serial) {
        for (int r = 0; r < scenario.rounds; ++r) one(r);
    } else {
#pragma omp parallel for schedule(static)
        for (int r = 0; r < scenario.rounds; ++r) one(r);
    }

    std::string csv = config_echo("simulate", scenario);
    csv += "round,coded_time,uncoded_time,ratio,master_utility_sample\n";
    for (int r = 0; r < scenario.rounds; ++r) {
        const RoundRow& row = rows[static_cast<std::size_t>(r)];
        csv += std::to_string(r + 1) + "," + g12(row.coded) + "," + g12(row.uncoded) +
               "," + g12(row.uncoded / row.coded) + "," + g12(row.utility) + "\n";
    }

    const auto stats = [&](auto pick, double& mean, double& std_error) {
        double total = 0.0;
        for (const RoundRow& row : rows) total += pick(row);
        mean = total / scenario.rounds;
        std_error = 0.0;
        if (scenario.rounds > 1) {
            double ss = 0.0;
            for (const RoundRow& row : rows) {
                const double d = pick(row) - mean;
                ss += d * d;
            }
            std_error = std::sqrt(ss / (scenario.rounds - 1) / scenario.rounds);
        }
    };
    double coded_mean, coded_se, uncoded_mean, uncoded_se, mu_mean, mu_se;
    stats([](const RoundRow& r) { return r.coded; }, coded_mean, coded_se);
    stats([](const RoundRow& r) { return r.uncoded; }, uncoded_mean, uncoded_se);
    stats([](const RoundRow& r) { return r.utility; }, mu_mean, mu_se);

    csv += "# coded_mean=" + g12(coded_mean) + " coded_std_error=" + g12(coded_se) + "\n";
    csv += "# uncoded_mean=" + g12(uncoded_mean) + " uncoded_std_error=" +
           g12(uncoded_se) + "\n";
    csv += "# speedup=" + g12(uncoded_mean / coded_mean) + "\n";
    csv += "# mc_master_utility=" + g12(mu_mean) + " mc_std_error=" + g12(mu_se) + "\n";
    csv += "# quadrature_master_utility=" +
           g12(master_utility_order_stats(config, bids)) + "\n";
    csv += "# simplified_master_utility=" +
           g12(master_utility_simplified(config, bids)) + "\n";
    write_text_file(scenario.out, csv);
}

std::string run_coded_demo(const CodedDemoOptions& options, Exec exec) {
    if (options.stragglers < 0 || options.stragglers > options.workers)
        throw std::invalid_argument("straggler count must be between 0 and workers");
    const PrimeField field(options.field_modulus);
    Rng rng(options.seed);
    const FieldMatrix a =
        FieldMatrix::random(field, options.shared_dim, options.cols_a, rng);
    const FieldMatrix b =
        FieldMatrix::random(field, options.shared_dim, options.cols_b, rng);
    const PartitionSpec spec{options.m, options.n};
    const int threshold = recovery_threshold(spec);

    auto [blocks_a, blocks_b] = partition(a, b, spec);
    const auto points = default_eval_points(field, options.workers);
    const auto tasks = encode(blocks_a, blocks_b, points);
    const auto results = run_workers(tasks, exec);

    std::vector<int> straggler_ids;
    for (int i = 0; i < options.stragglers; ++i)
        straggler_ids.push_back(options.workers - i);
    std::sort(straggler_ids.begin(), straggler_ids.end());
    const std::set<int> dropped(straggler_ids.begin(), straggler_ids.end());
    std::vector<ComputedBlock> arrived;
    for (const auto& r : results)
        if (!dropped.count(r.worker_id)) arrived.push_back(r);

    const FieldMatrix decoded = decode(arrived, spec, exec);
    const FieldMatrix direct = transpose_multiply(a, b, exec);

    std::string report;
    report += "coded matmul demo\n";
    report += "field modulus: " + std::to_string(field.modulus()) + "\n";
    report += "partition: m=" + std::to_string(options.m) +
              ", n=" + std::to_string(options.n) + " (recovery threshold " +
              std::to_string(threshold) + ")\n";
    report += "A: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
              ", B: " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()) +
              ", product: " + std::to_string(direct.rows()) + "x" +
              std::to_string(direct.cols()) + "\n";
    report += "workers: " + std::to_string(options.workers) + ", stragglers:";
    if (straggler_ids.empty()) {
        report += " none";
    } else {
        for (std::size_t i = 0; i < straggler_ids.size(); ++i)
            report += (i ? ", " : " ") + std::to_string(straggler_ids[i]);
    }
    report += "\n";
    report += "results arrived: " + std::to_string(arrived.size()) +
              ", used for decoding: " + std::to_string(threshold) + "\n";
    report += std::string("decoded exactly: ") +
              (decoded == direct ? "true" : "false") + "\n";
    return report;
}

void run_figures(const std::string& preset, const std::string& out_dir,
                 std::uint64_t seed, Exec exec) {
    struct Preset {
        const char* name;
        const char* structure;
        std::vector<int> workers;
        std::vector<int> rewards;
    };
    static const std::vector<Preset> presets = {
        {"fig1", "single", {5, 15}, {1}},
        {"fig2", "geometric:0.8", {5, 15}, {4}},
        {"fig3", "arithmetic:0.05", {5, 15}, {4}},
        {"fig4", "arithmetic:0.1", {5, 15}, {4}},
        {"fig5", "arithmetic:0.05", {10}, {3, 4, 5}},
    };

    std::vector<const Preset*> selected;
    for (const Preset& p : presets)
        if (preset == "all" || preset == p.name) selected.push_back(&p);
    if (selected.empty())
        throw std::invalid_argument("unknown figure preset '" + preset +
                                    "' (expected fig1..fig5 or all)");

    std::filesystem::create_directories(out_dir);
    for (const Preset* p : selected) {
        for (const std::string mode : {"table1", "normalized"}) {
            ScenarioConfig sc;
            sc.workers = p->workers;
            sc.rewards = p->rewards;
            sc.structures = {p->structure};
            sc.cost_mode = mode;
            sc.seed = seed;
            const std::string stem = out_dir + "/" + p->name + "_" + mode;
            sc.out = stem + ".csv";
            sc.svg = stem + ".svg";
            run_bid_curve(sc, exec);
        }
    }
}

}  // namespace capsim
