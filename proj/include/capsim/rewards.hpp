#pragma once

#include <string>
#include <vector>

namespace capsim {

/// Prize ladder handed to the top K bidders. prizes[0] is M_1, the prize for
/// the highest bid. Invariants (checked by validate): nonincreasing,
/// nonnegative, summing to sigma.
struct RewardSchedule {
    std::vector<double> prizes;
    double sigma = 0.0;

    int num_prizes() const { return static_cast<int>(prizes.size()); }
};

struct ValidationReport {
    bool ok = true;
    std::string violation;  // empty when ok

    explicit operator bool() const { return ok; }
};

inline constexpr double kBudgetTolerance = 1e-12;

/// (sigma, 0, ..., 0): the whole budget on the first prize.
RewardSchedule make_single(int k, double sigma);

/// Equal split sigma/K.
RewardSchedule make_homogeneous(int k, double sigma);

/// Consecutive prizes differ by exactly gamma: M_k = sigma/K + gamma*(K+1-2k)/2.
/// Throws when the last prize would go negative (gamma > 2*sigma/(K*(K-1))).
RewardSchedule make_arithmetic(int k, double gamma, double sigma);

/// Consecutive prizes have ratio eta, normalized to the budget. eta = 1 is the
/// equal split, eta = 0 puts everything on the first prize.
RewardSchedule make_geometric(int k, double eta, double sigma);

/// Checks ordering, nonnegativity and budget; reports the first violation.
ValidationReport validate(const RewardSchedule& schedule);

/// Builds a schedule from a CLI structure string: `single`, `homogeneous`,
/// `arithmetic:<gamma>` or `geometric:<eta>`. Throws invalid_argument on
/// unknown names, malformed numbers, or infeasible parameters.
RewardSchedule parse_structure(const std::string& text, int k, double sigma);

}  // namespace capsim
