#include "capsim/auction.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace capsim {

void CostModel::check() const {
    if (!(theta > 0.0) || !(kappa > 0.0) || !(cycles > 0.0))
        throw std::invalid_argument("cost model parameters must be strictly positive");
}

void AuctionConfig::check() const {
    if (workers < 2) throw std::invalid_argument("auction needs at least 2 workers");
    if (!dist) throw std::invalid_argument("auction config has no valuation distribution");
    cost.check();
    const ValidationReport report = validate(schedule);
    if (!report.ok)
        throw std::invalid_argument("invalid reward schedule: " + report.violation);
    if (num_prizes() > workers)
        throw std::invalid_argument("more prizes than workers");
}

double BidFunction::accumulator_at(double v) const {
    if (v <= grid.front()) return accumulator.front();
    if (v >= grid.back()) return accumulator.back();
    const auto it = std::upper_bound(grid.begin(), grid.end(), v);
    const std::size_t j = static_cast<std::size_t>(it - grid.begin());  // v < grid[j]
    const double lo = grid[j - 1], hi = grid[j];
    const double t = (v - lo) / (hi - lo);
    return accumulator[j - 1] + t * (accumulator[j] - accumulator[j - 1]);
}

std::vector<double> winning_probabilities(double v, const AuctionConfig& config) {
    const int opponents = config.workers - 1;
    const double big_f = config.dist->cdf(v);
    std::vector<double> probs(static_cast<std::size_t>(config.num_prizes()));
    double prev = 0.0;  // F_{0:I-1} = 0
    for (int k = 1; k <= config.num_prizes(); ++k) {
        const double cur = cdf_kth_highest(k, opponents, big_f);
        probs[static_cast<std::size_t>(k - 1)] = std::max(0.0, cur - prev);
        prev = cur;
    }
    return probs;
}

namespace {

// Integrand weight of the equilibrium cost integral: the opponent-order-stat
// densities weighted by consecutive prize differences, prizes past K being 0.
double prize_delta_density(double big_f, double small_f, const AuctionConfig& config) {
    const int opponents = config.workers - 1;
    const auto& m = config.schedule.prizes;
    const int num = config.num_prizes();
    double total = 0.0;
    // deltas vanish for k > K, so the sum stops at min(I-1, K)
    for (int k = 1; k <= opponents && k <= num; ++k) {
        const double mk = m[static_cast<std::size_t>(k - 1)];
        const double mk1 = k < num ? m[static_cast<std::size_t>(k)] : 0.0;
        const double delta = mk - mk1;
        if (delta == 0.0) continue;
        total += delta * pdf_kth_highest(k, opponents, big_f, small_f);
    }
    return total;
}

double cost_integrand(double u, const AuctionConfig& config) {
    return u * prize_delta_density(config.dist->cdf(u), config.dist->pdf(u), config);
}

}  // namespace

double equilibrium_accumulator(double v, const AuctionConfig& config, int intervals) {
    const double lo = config.dist->lower();
    const double hi = config.dist->upper();
    const double upper = std::clamp(v, lo, hi);
    return simpson([&](double u) { return cost_integrand(u, config); }, lo, upper,
                   intervals);
}

double equilibrium_bid(double v, const AuctionConfig& config, int intervals) {
    return config.cost.inverse_cost(equilibrium_accumulator(v, config, intervals));
}

BidFunction tabulate_bid_function(const AuctionConfig& config, int grid_size,
                                  Exec exec, int intervals) {
    if (grid_size < 2)
        throw std::invalid_argument("tabulate_bid_function: grid_size must be >= 2");
    const double lo = config.dist->lower();
    const double hi = config.dist->upper();
    const int segments = grid_size - 1;

    BidFunction out;
    out.cost = config.cost;
    out.grid.resize(static_cast<std::size_t>(grid_size));
    for (int j = 0; j < grid_size; ++j)
        out.grid[static_cast<std::size_t>(j)] =
            lo + (hi - lo) * static_cast<double>(j) / segments;
    out.grid.back() = hi;

    // spread the quadrature budget across segments, at least 2 points each
    int sub = intervals / segments;
    if (sub < 2) sub = 2;
    if (sub % 2 != 0) ++sub;

    std::vector<double> piece(static_cast<std::size_t>(segments));
    const auto segment_integral = [&](int j) {
        return simpson([&](double u) { return cost_integrand(u, config); },
                       out.grid[static_cast<std::size_t>(j)],
                       out.grid[static_cast<std::size_t>(j + 1)], sub);
    };
    if (exec == Exec::Serial) {
        for (int j = 0; j < segments; ++j)
            piece[static_cast<std::size_t>(j)] = segment_integral(j);
    } else {
#pragma omp parallel for schedule(static)
        for (int j = 0; j < segments; ++j)
            piece[static_cast<std::size_t>(j)] = segment_integral(j);
    }

    out.accumulator.resize(static_cast<std::size_t>(grid_size));
    out.accumulator[0] = 0.0;
    for (int j = 0; j < segments; ++j)
        out.accumulator[static_cast<std::size_t>(j + 1)] =
            out.accumulator[static_cast<std::size_t>(j)] +
            piece[static_cast<std::size_t>(j)];
    return out;
}

double worker_expected_utility(double v, double pretend, const AuctionConfig& config,
                               const BidFunction& bids) {
    const std::vector<double> probs = winning_probabilities(pretend, config);
    double expected_prize = 0.0;
    for (std::size_t k = 0; k < probs.size(); ++k)
        expected_prize += probs[k] * config.schedule.prizes[k];
    // the bid sits on the equilibrium curve, so its cost is the accumulator
    return v * expected_prize - bids.accumulator_at(pretend);
}

double worker_realized_utility(double v, int rank, const AuctionConfig& config,
                               double z) {
    if (rank < 1) throw std::invalid_argument("rank must be >= 1");
    const double paid = config.cost.theta * config.cost.energy(z);
    if (rank <= config.num_prizes())
        return v * config.schedule.prizes[static_cast<std::size_t>(rank - 1)] - paid;
    return -paid;
}

double foc_residual(double v, const AuctionConfig& config, const BidFunction& bids,
                    double step) {
    const double lo = bids.grid.front();
    const double hi = bids.grid.back();
    double h = step;
    if (h <= 0.0) {
        // must straddle at least one knot: the accumulator is only piecewise
        // linear, so a narrower stencil would differentiate a single segment
        const double cell = (hi - lo) / static_cast<double>(bids.grid.size() - 1);
        h = std::max(1e-4 * (hi - lo), 1.5 * cell);
    }
    const auto u = [&](double w) {
        return worker_expected_utility(v, w, config, bids);
    };
    if (v - h < lo) return (u(v + h) - u(v)) / h;
    if (v + h > hi) return (u(v) - u(v - h)) / h;
    return (u(v + h) - u(v - h)) / (2.0 * h);
}

double master_utility_order_stats(const AuctionConfig& config,
                                  const BidFunction& bids, int intervals) {
    const int total = config.workers;
    const int num = config.num_prizes();
    const double gross = simpson(
        [&](double v) {
            const double big_f = config.dist->cdf(v);
            const double small_f = config.dist->pdf(v);
            double density = 0.0;
            for (int k = 1; k <= num; ++k)
                density += pdf_kth_highest(k, total, big_f, small_f);
            return bids.bid_at(v) * density;
        },
        config.dist->lower(), config.dist->upper(), intervals);
    return gross - config.schedule.sigma;
}

double master_utility_simplified(const AuctionConfig& config,
                                 const BidFunction& bids, int intervals) {
    const double mean_bid = simpson(
        [&](double v) { return bids.bid_at(v) * config.dist->pdf(v); },
        config.dist->lower(), config.dist->upper(), intervals);
    return config.num_prizes() * mean_bid;
}

std::vector<int> rank_by_bid(const std::vector<double>& bids, Rng& rng) {
    std::vector<std::uint64_t> tiekey(bids.size());
    for (std::uint64_t& t : tiekey) t = rng.next_u64();
    std::vector<int> order(bids.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const std::size_t ia = static_cast<std::size_t>(a);
        const std::size_t ib = static_cast<std::size_t>(b);
        if (bids[ia] != bids[ib]) return bids[ia] > bids[ib];
        if (tiekey[ia] != tiekey[ib]) return tiekey[ia] < tiekey[ib];
        return a < b;
    });
    return order;
}

AuctionRound monte_carlo_round(const AuctionConfig& config, const BidFunction& bids,
                               Rng& rng) {
    const int total = config.workers;
    std::vector<double> vals(static_cast<std::size_t>(total));
    for (double& v : vals) v = config.dist->sample(rng);
    std::vector<double> z(static_cast<std::size_t>(total));
    for (int i = 0; i < total; ++i)
        z[static_cast<std::size_t>(i)] = bids.bid_at(vals[static_cast<std::size_t>(i)]);

    const std::vector<int> order = rank_by_bid(z, rng);

    AuctionRound round;
    round.records.resize(static_cast<std::size_t>(total));
    for (int pos = 0; pos < total; ++pos) {
        const int i = order[static_cast<std::size_t>(pos)];
        const int rank = pos + 1;
        WorkerRecord& rec = round.records[static_cast<std::size_t>(i)];
        rec.worker_id = i + 1;
        rec.valuation = vals[static_cast<std::size_t>(i)];
        rec.bid = z[static_cast<std::size_t>(i)];
        rec.energy = config.cost.energy(rec.bid);
        rec.rank = rank;
        rec.prize = rank <= config.num_prizes()
                        ? config.schedule.prizes[static_cast<std::size_t>(rank - 1)]
                        : 0.0;
        rec.utility = worker_realized_utility(rec.valuation, rank, config, rec.bid);
        if (rank <= config.num_prizes()) round.top_k_bid_sum += rec.bid;
    }
    round.master_utility_sample = round.top_k_bid_sum - config.schedule.sigma;
    return round;
}

MonteCarloStats estimate_master_utility(const AuctionConfig& config,
                                        const BidFunction& bids, int rounds,
                                        std::uint64_t seed, Exec exec) {
    if (rounds < 1) throw std::invalid_argument("need at least one round");
    std::vector<double> samples(static_cast<std::size_t>(rounds));
    if (exec == Exec::Serial) {
        for (int r = 0; r < rounds; ++r) {
            Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(r));
            samples[static_cast<std::size_t>(r)] =
                monte_carlo_round(config, bids, rng).master_utility_sample;
        }
    } else {
#pragma omp parallel for schedule(static)
        for (int r = 0; r < rounds; ++r) {
            Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(r));
            samples[static_cast<std::size_t>(r)] =
                monte_carlo_round(config, bids, rng).master_utility_sample;
        }
    }
    MonteCarloStats stats;
    stats.rounds = rounds;
    double total = 0.0;
    for (double s : samples) total += s;  // fixed order, independent of exec
    stats.mean = total / rounds;
    if (rounds > 1) {
        double ss = 0.0;
        for (double s : samples) ss += (s - stats.mean) * (s - stats.mean);
        stats.std_error = std::sqrt(ss / (rounds - 1) / rounds);
    }
    return stats;
}

namespace {

std::optional<RewardSchedule> transfer_between(const RewardSchedule& base, int k,
                                               double amount) {
    RewardSchedule moved = base;
    moved.prizes[static_cast<std::size_t>(k - 2)] -= amount;
    moved.prizes[static_cast<std::size_t>(k - 1)] += amount;
    if (!validate(moved).ok) return std::nullopt;
    return moved;
}

}  // namespace

WtaReport wta_local_test(const AuctionConfig& config, std::optional<double> step,
                         int grid_size, int intervals) {
    const int num = config.num_prizes();
    if (num < 2)
        throw std::invalid_argument("wta_local_test: need at least two prize slots");
    const double h = step ? *step : 1e-4 * config.schedule.sigma;
    if (!(h > 0.0))
        throw std::invalid_argument("wta_local_test: step must be positive");

    const auto utility_for = [&](const RewardSchedule& schedule) {
        AuctionConfig perturbed = config;
        perturbed.schedule = schedule;
        const BidFunction bids =
            tabulate_bid_function(perturbed, grid_size, Exec::Serial, intervals);
        return master_utility_order_stats(perturbed, bids, intervals);
    };

    WtaReport report;
    report.step = h;
    std::optional<double> base_utility;
    const auto base = [&] {
        if (!base_utility) base_utility = utility_for(config.schedule);
        return *base_utility;
    };

    for (int k = 2; k <= num; ++k) {
        // amount > 0 moves budget from prize k-1 down to prize k, so the
        // derivative of utility in `amount` is d/dM_k - d/dM_{k-1}
        const auto fwd = transfer_between(config.schedule, k, h);
        const auto bwd = transfer_between(config.schedule, k, -h);
        WtaDifference diff;
        diff.k = k;
        if (fwd && bwd) {
            diff.value = -(utility_for(*fwd) - utility_for(*bwd)) / (2.0 * h);
        } else if (fwd) {
            diff.value = -(utility_for(*fwd) - base()) / h;
            diff.one_sided = true;
        } else if (bwd) {
            diff.value = -(base() - utility_for(*bwd)) / h;
            diff.one_sided = true;
        } else {
            // Adjacent equal or zero prizes block the transfer at any step
            // size; only when a smaller step would have worked is h at fault.
            const double tiny = std::min(h, 1e-12 * config.schedule.sigma);
            if (tiny < h && (transfer_between(config.schedule, k, tiny) ||
                             transfer_between(config.schedule, k, -tiny)))
                throw std::invalid_argument(
                    "wta_local_test: step too large for a feasible transfer at k=" +
                    std::to_string(k));
            diff.value = std::numeric_limits<double>::quiet_NaN();
            diff.feasible = false;
        }
        report.differences.push_back(diff);
    }
    const bool any_feasible =
        std::any_of(report.differences.begin(), report.differences.end(),
                    [](const WtaDifference& d) { return d.feasible; });
    report.all_negative =
        any_feasible &&
        std::all_of(report.differences.begin(), report.differences.end(),
                    [](const WtaDifference& d) { return !d.feasible || d.value < 0.0; });
    return report;
}

}  // namespace capsim
