#pragma once

#include <cstddef>
#include <stdexcept>

namespace capsim {

/// Default subinterval count for composite Simpson integration.
inline constexpr int kDefaultIntervals = 10000;

/// Composite Simpson rule on [a, b] with `intervals` subintervals
/// (rounded up to the next even count, minimum 2). Returns 0 when a == b.
template <class F>
double simpson(F&& f, double a, double b, int intervals = kDefaultIntervals) {
    if (intervals < 1) throw std::invalid_argument("simpson: intervals must be >= 1");
    if (a == b) return 0.0;
    int n = intervals;
    if (n < 2) n = 2;
    if (n % 2 != 0) ++n;
    const double h = (b - a) / n;
    double odds = 0.0;
    double evens = 0.0;
    for (int i = 1; i < n; ++i) {
        const double x = a + h * i;
        if (i % 2 != 0)
            odds += f(x);
        else
            evens += f(x);
    }
    return h / 3.0 * (f(a) + f(b) + 4.0 * odds + 2.0 * evens);
}

}  // namespace capsim
