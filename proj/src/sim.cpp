#include "capsim/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace capsim {

void CompletionModel::check() const {
    if (!(cycles > 0.0))
        throw std::invalid_argument("completion model needs positive cycles");
    if (!(fixed_delay >= 0.0))
        throw std::invalid_argument("completion model delay must be nonnegative");
}

double completion_time(double z, const CompletionModel& model) {
    if (z < 0.0) throw std::invalid_argument("completion_time: negative CPU power");
    if (z == 0.0) return std::numeric_limits<double>::infinity();
    return model.cycles / z + model.fixed_delay;
}

SimulationOutcome run_round(const AuctionConfig& config, const CompletionModel& model,
                            const BidFunction& bids, Rng& rng) {
    const AuctionRound auction = monte_carlo_round(config, bids, rng);

    std::vector<double> times;
    times.reserve(auction.records.size());
    for (const WorkerRecord& rec : auction.records)
        times.push_back(completion_time(rec.bid, model));
    std::sort(times.begin(), times.end());

    SimulationOutcome outcome;
    outcome.records = auction.records;
    outcome.coded_completion_time =
        times[static_cast<std::size_t>(config.num_prizes() - 1)];
    outcome.uncoded_completion_time = times.back();
    outcome.master_payment = config.schedule.sigma;
    outcome.master_utility_sample = auction.master_utility_sample;
    return outcome;
}

ComparisonSummary compare_coded_uncoded(const AuctionConfig& config,
                                        const CompletionModel& model,
                                        const BidFunction& bids, int rounds,
                                        std::uint64_t seed, Exec exec) {
    if (rounds < 1) throw std::invalid_argument("need at least one round");
    std::vector<double> coded(static_cast<std::size_t>(rounds));
    std::vector<double> uncoded(static_cast<std::size_t>(rounds));
    const auto one = [&](int r) {
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(r));
        const SimulationOutcome outcome = run_round(config, model, bids, rng);
        coded[static_cast<std::size_t>(r)] = outcome.coded_completion_time;
        uncoded[static_cast<std::size_t>(r)] = outcome.uncoded_completion_time;
    };
    if (exec == Exec::Serial) {
        for (int r = 0; r < rounds; ++r) one(r);
    } else {
#pragma omp parallel for schedule(static)
        for (int r = 0; r < rounds; ++r) one(r);
    }

    const auto summarize = [&](const std::vector<double>& xs, double& mean,
                               double& std_error) {
        double total = 0.0;
        for (double x : xs) total += x;
        mean = total / rounds;
        if (rounds > 1) {
            double ss = 0.0;
            for (double x : xs) ss += (x - mean) * (x - mean);
            std_error = std::sqrt(ss / (rounds - 1) / rounds);
        }
    };

    ComparisonSummary summary;
    summary.rounds = rounds;
    summarize(coded, summary.coded_mean, summary.coded_std_error);
    summarize(uncoded, summary.uncoded_mean, summary.uncoded_std_error);
    summary.speedup = summary.uncoded_mean / summary.coded_mean;
    return summary;
}

}  // namespace capsim
