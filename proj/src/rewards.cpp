#include "capsim/rewards.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace capsim {

namespace {

void require_k(int k) {
    if (k < 1) throw std::invalid_argument("reward schedule needs at least one prize");
}

}  // namespace

RewardSchedule make_single(int k, double sigma) {
    require_k(k);
    if (!(sigma > 0.0))
        throw std::invalid_argument("make_single: budget must be positive");
    RewardSchedule s;
    s.sigma = sigma;
    s.prizes.assign(static_cast<std::size_t>(k), 0.0);
    s.prizes[0] = sigma;
    return s;
}

RewardSchedule make_homogeneous(int k, double sigma) {
    require_k(k);
    RewardSchedule s;
    s.sigma = sigma;
    s.prizes.assign(static_cast<std::size_t>(k), sigma / k);
    return s;
}

RewardSchedule make_arithmetic(int k, double gamma, double sigma) {
    require_k(k);
    if (!(gamma > 0.0))
        throw std::invalid_argument("make_arithmetic: gamma must be positive");
    RewardSchedule s;
    s.sigma = sigma;
    s.prizes.resize(static_cast<std::size_t>(k));
    for (int i = 1; i <= k; ++i)
        s.prizes[static_cast<std::size_t>(i - 1)] =
            sigma / k + gamma * (k + 1 - 2 * i) / 2.0;
    // the boundary gap 2*sigma/(K*(K-1)) must stay feasible despite rounding
    if (s.prizes.back() < -kBudgetTolerance)
        throw std::invalid_argument(
            "make_arithmetic: infeasible gamma, last prize is negative (need gamma "
            "<= 2*sigma/(K*(K-1)))");
    if (s.prizes.back() < 0.0) s.prizes.back() = 0.0;
    return s;
}

RewardSchedule make_geometric(int k, double eta, double sigma) {
    require_k(k);
    if (!(eta >= 0.0) || !(eta <= 1.0))
        throw std::invalid_argument("make_geometric: eta must be in [0, 1]");
    if (eta == 1.0) return make_homogeneous(k, sigma);
    RewardSchedule s;
    s.sigma = sigma;
    s.prizes.resize(static_cast<std::size_t>(k));
    // recurrence keeps consecutive ratios exactly eta
    double prize = sigma * (1.0 - eta) / (1.0 - std::pow(eta, k));
    for (int i = 0; i < k; ++i) {
        s.prizes[static_cast<std::size_t>(i)] = prize;
        prize *= eta;
    }
    return s;
}

ValidationReport validate(const RewardSchedule& schedule) {
    const auto& m = schedule.prizes;
    if (m.empty()) return {false, "schedule has no prizes"};
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i] < 0.0)
            return {false, "prize " + std::to_string(i + 1) + " is negative"};
        if (i + 1 < m.size() && m[i] < m[i + 1])
            return {false, "prizes increase at position " + std::to_string(i + 2)};
    }
    const double total = std::accumulate(m.begin(), m.end(), 0.0);
    if (std::abs(total - schedule.sigma) > kBudgetTolerance)
        return {false, "prizes sum to " + std::to_string(total) + ", budget is " +
                           std::to_string(schedule.sigma)};
    return {};
}

RewardSchedule parse_structure(const std::string& text, int k, double sigma) {
    if (text == "single") return make_single(k, sigma);
    if (text == "homogeneous") return make_homogeneous(k, sigma);

    const auto parse_param = [&](const std::string& prefix) {
        const std::string raw = text.substr(prefix.size());
        std::size_t used = 0;
        double value = 0.0;
        try {
            value = std::stod(raw, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != raw.size() || raw.empty())
            throw std::invalid_argument("bad structure parameter in '" + text + "'");
        return value;
    };

    if (text.rfind("arithmetic:", 0) == 0)
        return make_arithmetic(k, parse_param("arithmetic:"), sigma);
    if (text.rfind("geometric:", 0) == 0)
        return make_geometric(k, parse_param("geometric:"), sigma);
    throw std::invalid_argument(
        "unknown reward structure '" + text +
        "' (expected single, homogeneous, arithmetic:<gamma> or geometric:<eta>)");
}

}  // namespace capsim
