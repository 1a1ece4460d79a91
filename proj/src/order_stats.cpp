#include "capsim/order_stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace capsim {

UniformValuation::UniformValuation(double lo, double hi) : lo_(lo), hi_(hi) {
    if (!(lo >= 0.0) || !(lo < hi))
        throw std::invalid_argument("UniformValuation: need 0 <= lo < hi");
}

double UniformValuation::cdf(double v) const {
    if (v <= lo_) return 0.0;
    if (v >= hi_) return 1.0;
    return (v - lo_) / (hi_ - lo_);
}

double UniformValuation::pdf(double v) const {
    if (v < lo_ || v > hi_) return 0.0;
    return 1.0 / (hi_ - lo_);
}

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    if (k > n - k) k = n - k;
    if (n <= 60) {
        // multiplicative form stays integral at every step; C(60,30) < 2^63
        std::uint64_t res = 1;
        for (int i = 1; i <= k; ++i) {
            res = res * static_cast<std::uint64_t>(n - k + i) /
                  static_cast<std::uint64_t>(i);
        }
        return static_cast<double>(res);
    }
    return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                    std::lgamma(n - k + 1.0));
}

double cdf_kth_highest(int k, int n, double big_f) {
    if (k < 0 || n < 0)
        throw std::invalid_argument("cdf_kth_highest: k and n must be nonnegative");
    if (k > n) return 1.0;  // F_{n+1:n} and beyond
    const double f = std::clamp(big_f, 0.0, 1.0);
    double total = 0.0;
    for (int j = 0; j < k; ++j)
        total += binomial(n, j) * std::pow(1.0 - f, j) * std::pow(f, n - j);
    return std::clamp(total, 0.0, 1.0);
}

double cdf_kth_highest(int k, int n, const ValuationDistribution& dist, double v) {
    return cdf_kth_highest(k, n, dist.cdf(v));
}

double pdf_kth_highest(int k, int n, double big_f, double small_f) {
    if (k < 1 || k > n)
        throw std::invalid_argument("pdf_kth_highest: need 1 <= k <= " +
                                    std::to_string(n));
    const double f = std::clamp(big_f, 0.0, 1.0);
    const double scale = k * binomial(n, k);  // = n!/((n-k)!(k-1)!)
    return scale * std::pow(f, n - k) * std::pow(1.0 - f, k - 1) * small_f;
}

double pdf_kth_highest(int k, int n, const ValuationDistribution& dist, double v) {
    return pdf_kth_highest(k, n, dist.cdf(v), dist.pdf(v));
}

double expected_kth_highest(int k, int n, const ValuationDistribution& dist,
                            int intervals) {
    if (k < 1 || k > n)
        throw std::invalid_argument("expected_kth_highest: need 1 <= k <= " +
                                    std::to_string(n));
    return simpson(
        [&](double v) { return v * pdf_kth_highest(k, n, dist, v); },
        dist.lower(), dist.upper(), intervals);
}

std::vector<double> sample_descending(int n, const ValuationDistribution& dist,
                                      Rng& rng) {
    if (n < 1) throw std::invalid_argument("sample_descending: n must be >= 1");
    std::vector<double> draws(static_cast<std::size_t>(n));
    for (double& d : draws) d = dist.sample(rng);
    std::sort(draws.begin(), draws.end(), std::greater<>());
    return draws;
}

}  // namespace capsim
