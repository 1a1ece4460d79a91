#include <cmath>
#include <vector>

#include "capsim/order_stats.hpp"
#include "capsim/rng.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace capsim;
using doctest::Approx;

TEST_SUITE("order_stats") {

TEST_CASE("binomial coefficients are exact in the integer range") {
    CHECK(binomial(0, 0) == 1.0);
    CHECK(binomial(4, 2) == 6.0);
    CHECK(binomial(14, 7) == 3432.0);
    CHECK(binomial(60, 30) == 118264581564861424.0);
    CHECK(binomial(5, -1) == 0.0);
    CHECK(binomial(5, 6) == 0.0);
    for (int n = 0; n <= 60; ++n)
        for (int k = 0; k <= n; ++k)
            CHECK(binomial(n, k) == Approx(oracle::binom(n, k)).epsilon(1e-12));
}

TEST_CASE("binomial coefficients stay accurate past the exact range") {
    for (int n = 61; n <= 200; n += 13)
        for (int k = 0; k <= n; k += 7)
            CHECK(binomial(n, k) == Approx(oracle::binom(n, k)).epsilon(1e-10));
}

TEST_CASE("uniform valuation validates its support") {
    CHECK_THROWS_AS(UniformValuation(1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(UniformValuation(2.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(UniformValuation(-0.5, 1.0), std::invalid_argument);
    const UniformValuation u(1.0, 3.0);
    CHECK(u.cdf(2.0) == Approx(0.5));
    CHECK(u.pdf(2.0) == Approx(0.5));
    CHECK(u.cdf(0.0) == 0.0);
    CHECK(u.cdf(4.0) == 1.0);
    CHECK(u.pdf(0.0) == 0.0);
    CHECK(u.pdf(4.0) == 0.0);
}

TEST_CASE("kth-highest cdf matches hand values on uniform draws") {
    const UniformValuation u(0.0, 1.0);
    CHECK(cdf_kth_highest(0, 4, u, 0.7) == 0.0);
    // lowest of four below 1/2: 1 - (1/2)^4
    CHECK(cdf_kth_highest(4, 4, u, 0.5) == Approx(0.9375).epsilon(1e-12));
    // highest of four below 1/2: (1/2)^4
    CHECK(cdf_kth_highest(1, 4, u, 0.5) == Approx(0.0625).epsilon(1e-12));
    // k = n+1 is the degenerate always-true statistic
    CHECK(cdf_kth_highest(5, 4, u, 0.3) == 1.0);
    CHECK_THROWS_AS(cdf_kth_highest(-1, 4, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(cdf_kth_highest(1, -1, 0.5), std::invalid_argument);
}

TEST_CASE("kth-highest cdf hits 0 and 1 at the support ends") {
    const UniformValuation u(0.0, 1.0);
    for (int n : {1, 4, 9}) {
        for (int k = 1; k <= n; ++k) {
            CHECK(cdf_kth_highest(k, n, u, 0.0) == 0.0);
            CHECK(cdf_kth_highest(k, n, u, 1.0) == Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("kth-highest cdf is monotone in the argument and in k") {
    const UniformValuation u(0.0, 1.0);
    const int n = 6;
    for (int k = 1; k <= n; ++k) {
        double prev = -1.0;
        for (int i = 0; i <= 50; ++i) {
            const double v = i / 50.0;
            const double cur = cdf_kth_highest(k, n, u, v);
            CHECK(cur >= prev);
            prev = cur;
            // a lower rank index means a higher statistic, so a smaller cdf
            if (k > 1)
                CHECK(cdf_kth_highest(k - 1, n, u, v) <= cur + 1e-15);
        }
    }
}

TEST_CASE("kth-highest pdf matches hand values") {
    const UniformValuation u(0.0, 1.0);
    // maximum of four at 1/2: 4 * (1/2)^3
    CHECK(pdf_kth_highest(1, 4, u, 0.5) == Approx(0.5).epsilon(1e-12));
    CHECK(pdf_kth_highest(1, 1, u, 0.3) == Approx(1.0).epsilon(1e-12));
    // minimum of four at 0: 4 * (1-0)^3
    CHECK(pdf_kth_highest(4, 4, u, 0.0) == Approx(4.0).epsilon(1e-12));
    CHECK_THROWS_AS(pdf_kth_highest(0, 4, 0.5, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(pdf_kth_highest(5, 4, 0.5, 1.0), std::invalid_argument);
}

TEST_CASE("densities of all ranks sum to n times the parent density") {
    const UniformValuation u(0.0, 1.0);
    for (int n : {4, 9, 14}) {
        for (int i = 1; i < 40; ++i) {
            const double v = i / 40.0;
            double sum = 0.0;
            for (int k = 1; k <= n; ++k) sum += pdf_kth_highest(k, n, u, v);
            CHECK(sum == Approx(n * u.pdf(v)).epsilon(1e-9));
        }
    }
}

TEST_CASE("pdf is the derivative of the cdf") {
    const UniformValuation u(0.0, 1.0);
    const double h = 1e-5;
    for (int n : {3, 7}) {
        for (int k = 1; k <= n; ++k) {
            for (int i = 1; i < 20; ++i) {
                const double v = i / 20.0;
                const double num =
                    (cdf_kth_highest(k, n, u, v + h) - cdf_kth_highest(k, n, u, v - h)) /
                    (2.0 * h);
                CHECK(num == Approx(pdf_kth_highest(k, n, u, v)).epsilon(1e-6));
            }
        }
    }
}

TEST_CASE("adjacent-rank cdf gaps telescope to a nonnegative binomial term") {
    const UniformValuation u(0.0, 1.0);
    const int n = 8;
    for (int k = 1; k <= n + 1; ++k) {
        for (int i = 0; i <= 20; ++i) {
            const double v = i / 20.0;
            const double big_f = u.cdf(v);
            const double gap =
                cdf_kth_highest(k, n, big_f) - cdf_kth_highest(k - 1, n, big_f);
            const double expected = binomial(n, k - 1) *
                                    std::pow(1.0 - big_f, k - 1) *
                                    std::pow(big_f, n - k + 1);
            CHECK(gap >= -1e-15);
            CHECK(gap == Approx(expected).epsilon(1e-9));
        }
    }
}

TEST_CASE("expected order statistics of the standard uniform are rational") {
    const UniformValuation u(0.0, 1.0);
    CHECK(expected_kth_highest(1, 4, u) == Approx(0.8).epsilon(1e-9));
    CHECK(expected_kth_highest(4, 4, u) == Approx(0.2).epsilon(1e-9));
    CHECK(expected_kth_highest(1, 1, u) == Approx(0.5).epsilon(1e-9));
    for (int n : {2, 5, 9}) {
        for (int k = 1; k <= n; ++k) {
            CHECK(expected_kth_highest(k, n, u) ==
                  Approx(double(n + 1 - k) / (n + 1)).epsilon(1e-9));
        }
    }
}

TEST_CASE("descending samples are sorted and deterministic per seed") {
    const UniformValuation u(0.0, 1.0);
    Rng a(123), b(123);
    const auto xs = sample_descending(6, u, a);
    const auto ys = sample_descending(6, u, b);
    REQUIRE(xs.size() == 6);
    CHECK(xs == ys);
    for (std::size_t i = 1; i < xs.size(); ++i) CHECK(xs[i - 1] >= xs[i]);
    for (double x : xs) {
        CHECK(x >= 0.0);
        CHECK(x <= 1.0);
    }
    CHECK_THROWS_AS(sample_descending(0, u, a), std::invalid_argument);
}

TEST_CASE("sampled order statistics match their expected positions") {
    const UniformValuation u(0.0, 1.0);
    Rng rng(2024);
    const int n = 100000;
    const auto xs = sample_descending(n, u, rng);
    for (int k : {1, 10, 1000, 50000, 99990}) {
        const double mean = double(n + 1 - k) / (n + 1);
        const double var = double(k) * (n + 1 - k) /
                           (double(n + 1) * (n + 1) * (n + 2));
        CHECK(std::abs(xs[k - 1] - mean) <= 3.0 * std::sqrt(var));
    }
}

}  // TEST_SUITE
