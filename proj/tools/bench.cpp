// Times each parallel kernel against its serial reference and checks that the
// two produce identical results. Exits nonzero on any mismatch.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "capsim/auction.hpp"
#include "capsim/coded.hpp"
#include "capsim/experiments.hpp"
#include "capsim/matrix.hpp"
#include "capsim/sim.hpp"

using namespace capsim;

namespace {

template <class F>
double time_ms(F&& fn) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    const auto stop = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(stop - start).count();
}

struct Row {
    std::string name;
    double serial_ms = 0.0;
    double parallel_ms = 0.0;
    bool match = false;
};

}  // namespace

int main() {
    std::vector<Row> rows;

    {
        const PrimeField field(65537);
        Rng rng(99);
        const FieldMatrix a = FieldMatrix::random(field, 192, 96, rng);
        const FieldMatrix b = FieldMatrix::random(field, 192, 96, rng);
        const PartitionSpec spec{2, 2};
        const std::vector<int> stragglers = {9, 10};
        FieldMatrix serial_c(field, 0, 0), parallel_c(field, 0, 0);
        Row row{"coded matmul (192x96 blocks, 10 workers)"};
        row.serial_ms = time_ms(
            [&] { serial_c = end_to_end(a, b, spec, 10, stragglers, Exec::Serial); });
        row.parallel_ms = time_ms([&] {
            parallel_c = end_to_end(a, b, spec, 10, stragglers, Exec::Parallel);
        });
        row.match = serial_c == parallel_c;
        rows.push_back(row);
    }

    ScenarioConfig sc;
    sc.workers = {15};
    sc.rewards = {4};
    sc.cost_mode = "normalized";
    const AuctionConfig config = make_auction_config(sc, 15, 4, "arithmetic:0.05");
    {
        BidFunction serial_bids, parallel_bids;
        Row row{"bid tabulation (grid 4001, 400k intervals)"};
        row.serial_ms = time_ms(
            [&] { serial_bids = tabulate_bid_function(config, 4001, Exec::Serial, 400000); });
        row.parallel_ms = time_ms([&] {
            parallel_bids = tabulate_bid_function(config, 4001, Exec::Parallel, 400000);
        });
        row.match = serial_bids.accumulator == parallel_bids.accumulator &&
                    serial_bids.grid == parallel_bids.grid;
        rows.push_back(row);
    }

    const BidFunction bids = tabulate_bid_function(config, 1001);
    {
        MonteCarloStats serial_stats, parallel_stats;
        Row row{"auction Monte Carlo (200k rounds, I=15)"};
        row.serial_ms = time_ms([&] {
            serial_stats = estimate_master_utility(config, bids, 200000, 7, Exec::Serial);
        });
        row.parallel_ms = time_ms([&] {
            parallel_stats =
                estimate_master_utility(config, bids, 200000, 7, Exec::Parallel);
        });
        row.match = serial_stats.mean == parallel_stats.mean &&
                    serial_stats.std_error == parallel_stats.std_error;
        rows.push_back(row);
    }

    {
        CompletionModel model{5e12, 0.0};
        ComparisonSummary serial_sum, parallel_sum;
        Row row{"straggler sim (100k rounds, I=15, K=4)"};
        row.serial_ms = time_ms([&] {
            serial_sum = compare_coded_uncoded(config, model, bids, 100000, 11,
                                               Exec::Serial);
        });
        row.parallel_ms = time_ms([&] {
            parallel_sum = compare_coded_uncoded(config, model, bids, 100000, 11,
                                                 Exec::Parallel);
        });
        row.match = serial_sum.coded_mean == parallel_sum.coded_mean &&
                    serial_sum.uncoded_mean == parallel_sum.uncoded_mean &&
                    serial_sum.coded_std_error == parallel_sum.coded_std_error &&
                    serial_sum.uncoded_std_error == parallel_sum.uncoded_std_error;
        rows.push_back(row);
    }

    std::printf("%-44s %10s %10s %8s %6s\n", "kernel", "serial ms", "parallel", "speedup",
                "match");
    bool all_match = true;
    for (const Row& row : rows) {
        std::printf("%-44s %10.1f %10.1f %7.2fx %6s\n", row.name.c_str(), row.serial_ms,
                    row.parallel_ms, row.serial_ms / row.parallel_ms,
                    row.match ? "yes" : "NO");
        all_match = all_match && row.match;
    }
    std::printf("threads: %d\n", max_threads());
    return all_match ? 0 : 1;
}
