#pragma once

#include <cstdint>
#include <random>

namespace capsim {

/// Seeded random source. All randomness in the library flows through this
/// wrapper so that runs are reproducible: doubles are built from the top 53
/// bits of the engine output rather than std::uniform_real_distribution,
/// whose output is implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(expand_seed(seed)) {}

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform double in [0, 1).
    double next_unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double next_in(double lo, double hi) { return lo + next_unit() * (hi - lo); }

    /// Decorrelated child stream; used to give each Monte Carlo round its
    /// own generator so rounds can run in any order or in parallel.
    static Rng stream(std::uint64_t master_seed, std::uint64_t stream_index);

private:
    static std::uint64_t expand_seed(std::uint64_t s);
    std::mt19937_64 gen_;
};

namespace detail {
/// splitmix64 step; advances state and returns the next value.
std::uint64_t splitmix64(std::uint64_t& state);
}  // namespace detail

}  // namespace capsim
