#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "capsim/exec.hpp"
#include "capsim/order_stats.hpp"
#include "capsim/quadrature.hpp"
#include "capsim/rewards.hpp"
#include "capsim/rng.hpp"

namespace capsim {

/// Quadratic energy cost of allocating z units of CPU power to a subtask of
/// `cycles` total cycles: energy = kappa*cycles*z^2, money cost = theta*energy.
struct CostModel {
    double theta = 1.0;
    double kappa = 1.0;
    double cycles = 1.0;

    double energy(double z) const { return kappa * cycles * z * z; }
    double cost(double z) const { return theta * energy(z); }
    double inverse_cost(double y) const {
        return std::sqrt(y / (theta * kappa * cycles));
    }
    void check() const;  // throws unless all fields are strictly positive
};

struct AuctionConfig {
    int workers = 2;  // I, number of bidders
    std::shared_ptr<const ValuationDistribution> dist;
    CostModel cost;
    RewardSchedule schedule;

    int num_prizes() const { return schedule.num_prizes(); }
    void check() const;  // workers >= 2, dist set, positive costs, valid
                         // schedule, no more prizes than workers
};

/// Equilibrium bid curve tabulated on a valuation grid. `accumulator` holds
/// the cumulative cost integral at each knot (0 at the low end, nondecreasing);
/// the bid is the cost inverse of it. Immutable once built, safe to share.
struct BidFunction {
    std::vector<double> grid;
    std::vector<double> accumulator;
    CostModel cost;

    /// Piecewise-linear between knots, clamped outside the grid.
    double accumulator_at(double v) const;
    double bid_at(double v) const { return cost.inverse_cost(accumulator_at(v)); }
    double max_bid() const { return cost.inverse_cost(accumulator.back()); }
};

struct WorkerRecord {
    int worker_id = 0;   // 1-based
    double valuation = 0.0;
    double bid = 0.0;    // z, CPU power
    double energy = 0.0;
    int rank = 0;        // 1 = highest bid
    double prize = 0.0;  // 0 when rank is out of the prize ladder
    double utility = 0.0;
};

struct AuctionRound {
    std::vector<WorkerRecord> records;  // in worker-id order
    double top_k_bid_sum = 0.0;
    double master_utility_sample = 0.0;  // top_k_bid_sum - sigma
};

struct MonteCarloStats {
    double mean = 0.0;
    double std_error = 0.0;
    int rounds = 0;
};

struct WtaDifference {
    int k = 0;           // compares prizes k-1 and k
    double value = 0.0;  // d(master utility)/dM_{k-1} - d/dM_k; NaN if infeasible
    bool one_sided = false;
    bool feasible = true;  // false when no transfer of any size keeps the
                           // schedule valid (equal or zero adjacent prizes)
};

struct WtaReport {
    std::vector<WtaDifference> differences;  // k = 2..K
    double step = 0.0;
    bool all_negative = false;  // some pair is feasible and all of those are < 0
};

/// p^k(v) for k = 1..K: probability that a worker of valuation v ends up with
/// exactly the k-th prize when everyone bids monotonically.
std::vector<double> winning_probabilities(double v, const AuctionConfig& config);

/// Cumulative cost a worker of valuation v pays in equilibrium, i.e. the
/// prize-difference-weighted integral of the opponent order statistics.
double equilibrium_accumulator(double v, const AuctionConfig& config,
                               int intervals = kDefaultIntervals);

/// Equilibrium CPU-power bid: cost inverse of the accumulator.
double equilibrium_bid(double v, const AuctionConfig& config,
                       int intervals = kDefaultIntervals);

/// Tabulates the accumulator on a uniform grid of `grid_size` knots, spending
/// about `intervals` quadrature points across the whole support. Serial and
/// parallel execution produce bitwise-identical tables.
BidFunction tabulate_bid_function(const AuctionConfig& config, int grid_size,
                                  Exec exec = Exec::Parallel,
                                  int intervals = kDefaultIntervals);

/// Expected utility of a worker whose true valuation is v but who bids as if
/// it were `pretend`. At pretend = v this is the equilibrium utility.
double worker_expected_utility(double v, double pretend,
                               const AuctionConfig& config,
                               const BidFunction& bids);

/// Realized utility after the auction: prize (if rank is within the ladder)
/// minus energy cost of the bid z.
double worker_realized_utility(double v, int rank, const AuctionConfig& config,
                               double z);

/// Derivative of pretend -> worker_expected_utility(v, pretend) at pretend = v.
/// Zero (up to quadrature noise) when the tabulated bid is an equilibrium.
/// step <= 0 picks a default tied to the tabulation grid spacing.
double foc_residual(double v, const AuctionConfig& config,
                    const BidFunction& bids, double step = 0.0);

/// Master's expected utility: sum over prize ranks of the expected bid of the
/// rank-holder, minus the budget.
double master_utility_order_stats(const AuctionConfig& config,
                                  const BidFunction& bids,
                                  int intervals = kDefaultIntervals);

/// The simplified objective K * E[bid] (no budget subtraction); reported
/// alongside the order-statistics value because the two differ when K < I.
double master_utility_simplified(const AuctionConfig& config,
                                 const BidFunction& bids,
                                 int intervals = kDefaultIntervals);

/// Worker indices (0-based) sorted best rank first: by bid descending, ties
/// broken uniformly at random via one tiekey draw per worker.
std::vector<int> rank_by_bid(const std::vector<double>& bids, Rng& rng);

/// One auction round: I valuation draws, equilibrium bids, ranking with
/// random tie-breaks, prizes by rank.
AuctionRound monte_carlo_round(const AuctionConfig& config,
                               const BidFunction& bids, Rng& rng);

/// Mean and standard error of the per-round master utility over `rounds`
/// independent rounds. Each round gets its own derived rng stream, so the
/// result is identical for serial and parallel execution.
MonteCarloStats estimate_master_utility(const AuctionConfig& config,
                                        const BidFunction& bids, int rounds,
                                        std::uint64_t seed,
                                        Exec exec = Exec::Parallel);

/// Finite-difference test of the winner-take-all condition: for each adjacent
/// prize pair, the change in master utility per unit of budget moved from the
/// higher prize to the lower one. Uses budget-preserving transfers; falls back
/// to a one-sided difference at the boundary of the feasible prize simplex.
/// Default step is 1e-4 * sigma; a nonpositive step is rejected.
WtaReport wta_local_test(const AuctionConfig& config,
                         std::optional<double> step = std::nullopt,
                         int grid_size = 1001, int intervals = kDefaultIntervals);

}  // namespace capsim
