#pragma once

#include <vector>

#include "capsim/quadrature.hpp"
#include "capsim/rng.hpp"

namespace capsim {

/// Distribution of a single worker's private valuation. Implementations must
/// have cdf 0 at lower(), 1 at upper(), nondecreasing in between; cdf/pdf are
/// clamped for arguments outside the support.
class ValuationDistribution {
public:
    virtual ~ValuationDistribution() = default;
    virtual double cdf(double v) const = 0;
    virtual double pdf(double v) const = 0;
    virtual double lower() const = 0;
    virtual double upper() const = 0;
    virtual double sample(Rng& rng) const = 0;
};

class UniformValuation final : public ValuationDistribution {
public:
    /// Requires 0 <= lo < hi.
    UniformValuation(double lo, double hi);

    double cdf(double v) const override;
    double pdf(double v) const override;
    double lower() const override { return lo_; }
    double upper() const override { return hi_; }
    double sample(Rng& rng) const override { return rng.next_in(lo_, hi_); }

private:
    double lo_;
    double hi_;
};

/// C(n, k) as a double. Exact integer arithmetic up to n = 60, log-gamma
/// beyond that. Zero when k < 0 or k > n.
double binomial(int n, int k);

/// P(k-th highest of n i.i.d. draws <= v), given F = cdf(v).
/// Conventions: k = 0 gives 0, k = n+1 gives 1. Requires k, n >= 0.
double cdf_kth_highest(int k, int n, double big_f);
double cdf_kth_highest(int k, int n, const ValuationDistribution& dist, double v);

/// Density of the k-th highest of n draws at a point with cdf big_f and
/// density small_f. Requires 1 <= k <= n.
double pdf_kth_highest(int k, int n, double big_f, double small_f);
double pdf_kth_highest(int k, int n, const ValuationDistribution& dist, double v);

/// E[v_{k:n}] by quadrature over the support. For uniform[0,1] this is
/// (n+1-k)/(n+1).
double expected_kth_highest(int k, int n, const ValuationDistribution& dist,
                            int intervals = kDefaultIntervals);

/// n i.i.d. draws sorted descending (v_{1:n} first).
std::vector<double> sample_descending(int n, const ValuationDistribution& dist,
                                      Rng& rng);

}  // namespace capsim
