#pragma once

#include <cstdint>
#include <vector>

#include "capsim/auction.hpp"

namespace capsim {

/// Wall-clock model for one worker finishing its subtask: cycles over
/// allocated CPU power plus an optional flat transmission delay.
struct CompletionModel {
    double cycles = 1.0;
    double fixed_delay = 0.0;

    void check() const;  // cycles > 0, fixed_delay >= 0
};

/// Time until a worker bidding z delivers its result. z = 0 means the worker
/// never delivers (infinity).
double completion_time(double z, const CompletionModel& model);

struct SimulationOutcome {
    std::vector<WorkerRecord> records;     // in worker-id order
    double coded_completion_time = 0.0;    // K-th earliest delivery
    double uncoded_completion_time = 0.0;  // last delivery
    double master_payment = 0.0;           // sigma
    double master_utility_sample = 0.0;    // top-K bid sum minus sigma
};

/// One full round: auction (draws, bids, ranking, prizes) plus the delivery
/// timeline. The master can reconstruct after K results, so the coded time is
/// the K-th earliest completion; the uncoded baseline waits for everyone.
SimulationOutcome run_round(const AuctionConfig& config,
                            const CompletionModel& model,
                            const BidFunction& bids, Rng& rng);

struct ComparisonSummary {
    int rounds = 0;
    double coded_mean = 0.0;
    double coded_std_error = 0.0;
    double uncoded_mean = 0.0;
    double uncoded_std_error = 0.0;
    double speedup = 0.0;  // uncoded_mean / coded_mean
};

/// Averages the two completion times over independent rounds. Per-round rng
/// streams are derived from the seed, so serial and parallel execution give
/// identical summaries.
ComparisonSummary compare_coded_uncoded(const AuctionConfig& config,
                                        const CompletionModel& model,
                                        const BidFunction& bids, int rounds,
                                        std::uint64_t seed,
                                        Exec exec = Exec::Parallel);

}  // namespace capsim
