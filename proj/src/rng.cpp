#include "capsim/rng.hpp"

#include "capsim/exec.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace capsim {

namespace detail {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

}  // namespace detail

std::uint64_t Rng::expand_seed(std::uint64_t s) {
    // One mixing step so nearby seeds (0, 1, 2, ...) land far apart.
    return detail::splitmix64(s);
}

Rng Rng::stream(std::uint64_t master_seed, std::uint64_t stream_index) {
    std::uint64_t state = master_seed;
    std::uint64_t a = detail::splitmix64(state);
    state ^= stream_index * 0x9e3779b97f4a7c15ull;
    std::uint64_t b = detail::splitmix64(state);
    return Rng(a ^ (b + 0x9e3779b97f4a7c15ull + (a << 6) + (a >> 2)));
}

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace capsim
