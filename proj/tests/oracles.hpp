// Independent reference implementations used only by tests. Kept deliberately
// naive and method-distinct from the library: modular arithmetic avoids wide
// integers, integration avoids Simpson, closed forms are expanded by hand.
#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace oracle {

// double-and-add modular multiply; valid for q < 2^63
inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t q) {
    a %= q;
    b %= q;
    std::uint64_t acc = 0;
    while (b) {
        if (b & 1) {
            acc += a;
            if (acc >= q) acc -= q;
        }
        b >>= 1;
        a <<= 1;
        if (a >= q) a -= q;
    }
    return acc;
}

// O(e) repeated multiplication; small exponents only
inline std::uint64_t powmod_naive(std::uint64_t base, std::uint64_t e,
                                  std::uint64_t q) {
    std::uint64_t acc = 1 % q;
    for (std::uint64_t i = 0; i < e; ++i) acc = mulmod(acc, base, q);
    return acc;
}

inline std::uint64_t inv_exhaustive(std::uint64_t a, std::uint64_t q) {
    for (std::uint64_t b = 1; b < q; ++b)
        if (mulmod(a, b, q) == 1) return b;
    return 0;
}

// schoolbook A^T B over F_q on plain nested vectors
inline std::vector<std::vector<std::uint64_t>> transpose_multiply_mod(
    const std::vector<std::vector<std::uint64_t>>& a,
    const std::vector<std::vector<std::uint64_t>>& b, std::uint64_t q) {
    const std::size_t s = a.size();
    const std::size_t r = a[0].size();
    const std::size_t t = b[0].size();
    std::vector<std::vector<std::uint64_t>> c(r, std::vector<std::uint64_t>(t, 0));
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < t; ++j) {
            std::uint64_t acc = 0;
            for (std::size_t k = 0; k < s; ++k) {
                acc += mulmod(a[k][i], b[k][j], q);
                if (acc >= q) acc -= q;
            }
            c[i][j] = acc;
        }
    return c;
}

inline double binom(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double res = 1.0;
    for (int i = 1; i <= k; ++i) res = res * (n - k + i) / i;
    return res;
}

// exact integral of u * f_{k:n}(u) over [0, v] for the uniform[0,1] parent,
// by expanding (1-u)^{k-1} binomially and integrating term by term
inline double partial_mean_kth_uniform(int k, int n, double v) {
    double total = 0.0;
    for (int j = 0; j < k; ++j) {
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;
        const int p = n - k + j + 2;
        total += sign * binom(k - 1, j) * std::pow(v, p) / p;
    }
    return k * binom(n, k) * total;
}

// cumulative equilibrium cost for uniform[0,1] valuations: prize-difference
// weighted sum of the partial means above; exact up to double rounding
inline double accumulator_uniform(const std::vector<double>& prizes, int opponents,
                                  double v) {
    const int num = static_cast<int>(prizes.size());
    double total = 0.0;
    for (int k = 1; k <= opponents && k <= num; ++k) {
        const double next = k < num ? prizes[static_cast<std::size_t>(k)] : 0.0;
        const double delta = prizes[static_cast<std::size_t>(k - 1)] - next;
        if (delta != 0.0) total += delta * partial_mean_kth_uniform(k, opponents, v);
    }
    return total;
}

// trapezoid rule: method-independent cross-check for quadrature results
template <class F>
double trapezoid(F&& f, double a, double b, int n) {
    const double h = (b - a) / n;
    double total = 0.5 * (f(a) + f(b));
    for (int i = 1; i < n; ++i) total += f(a + i * h);
    return total * h;
}

inline double mean(const std::vector<double>& xs) {
    double total = 0.0;
    for (double x : xs) total += x;
    return total / static_cast<double>(xs.size());
}

}  // namespace oracle
