#include "capsim/field.hpp"

namespace capsim {

namespace {

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t base = a % m;
    std::uint64_t acc = 1 % m;
    while (e > 0) {
        if (e & 1u) acc = mulmod_u64(acc, base, m);
        e >>= 1u;
        if (e) base = mulmod_u64(base, base, m);
    }
    return acc;
}

// extended Euclid; q prime and a in [1, q) so gcd(a, q) == 1
std::uint64_t invmod_u64(std::uint64_t a, std::uint64_t q) {
    std::int64_t t = 0, new_t = 1;
    std::uint64_t r = q, new_r = a;
    while (new_r != 0) {
        const std::uint64_t quotient = r / new_r;
        const std::int64_t tmp_t = t - static_cast<std::int64_t>(quotient) * new_t;
        t = new_t;
        new_t = tmp_t;
        const std::uint64_t tmp_r = r - quotient * new_r;
        r = new_r;
        new_r = tmp_r;
    }
    return t < 0 ? static_cast<std::uint64_t>(t + static_cast<std::int64_t>(q))
                 : static_cast<std::uint64_t>(t);
}

void require_same_field(const FieldElement& a, const FieldElement& b) {
    if (a.q != b.q)
        throw std::invalid_argument("FieldElement: operands belong to different fields");
}

}  // namespace

bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                            23ull, 29ull, 31ull, 37ull}) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    // deterministic Miller-Rabin witness set for all 64-bit integers
    std::uint64_t d = n - 1;
    int r = 0;
    while ((d & 1u) == 0) {
        d >>= 1u;
        ++r;
    }
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                            23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 0; i < r - 1; ++i) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

PrimeField::PrimeField(std::uint64_t q) : q_(q) {
    if (q <= 2) throw std::invalid_argument("PrimeField: modulus must exceed 2");
    if (!is_prime_u64(q)) throw std::invalid_argument("PrimeField: modulus must be prime");
}

std::uint64_t PrimeField::pow(std::uint64_t a, std::uint64_t e) const {
    return powmod_u64(a % q_, e, q_);
}

std::uint64_t PrimeField::inv(std::uint64_t a) const {
    if (a == 0) throw std::domain_error("PrimeField: inversion of zero");
    return invmod_u64(a % q_, q_);
}

FieldElement operator+(FieldElement a, FieldElement b) {
    require_same_field(a, b);
    const std::uint64_t gap = a.q - b.value;
    return {a.value >= gap ? a.value - gap : a.value + b.value, a.q};
}

FieldElement operator-(FieldElement a, FieldElement b) {
    require_same_field(a, b);
    return {a.value >= b.value ? a.value - b.value : a.value + (a.q - b.value), a.q};
}

FieldElement operator*(FieldElement a, FieldElement b) {
    require_same_field(a, b);
    return {mulmod_u64(a.value, b.value, a.q), a.q};
}

FieldElement inv(FieldElement a) {
    if (a.value == 0) throw std::domain_error("FieldElement: inversion of zero");
    return {invmod_u64(a.value % a.q, a.q), a.q};
}

FieldElement pow(FieldElement a, std::uint64_t e) {
    return {powmod_u64(a.value, e, a.q), a.q};
}

}  // namespace capsim
