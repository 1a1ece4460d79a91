#pragma once

#include <cstdint>
#include <stdexcept>

namespace capsim {

/// Prime field F_q. Holds the modulus and provides exact modular arithmetic
/// on canonical residues in [0, q). The modulus must be an odd prime > 2 and
/// may be any 64-bit value; products are taken in 128-bit width before
/// reduction.
class PrimeField {
public:
    /// Throws std::invalid_argument unless q > 2 and q is prime.
    explicit PrimeField(std::uint64_t q);

    std::uint64_t modulus() const { return q_; }

    std::uint64_t reduce(std::uint64_t x) const { return x % q_; }

    std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
        // overflow-safe for q near 2^64: a + b never formed when it could wrap
        const std::uint64_t gap = q_ - b;
        return a >= gap ? a - gap : a + b;
    }

    std::uint64_t sub(std::uint64_t a, std::uint64_t b) const {
        return a >= b ? a - b : a + (q_ - b);
    }

    std::uint64_t neg(std::uint64_t a) const { return a == 0 ? 0 : q_ - a; }

    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
        return static_cast<std::uint64_t>(
            static_cast<unsigned __int128>(a) * b % q_);
    }

    /// a^e by square-and-multiply; a^0 == 1 (including 0^0 == 1).
    std::uint64_t pow(std::uint64_t a, std::uint64_t e) const;

    /// Multiplicative inverse by extended Euclid.
    /// Throws std::domain_error on a == 0.
    std::uint64_t inv(std::uint64_t a) const;

    bool operator==(const PrimeField& other) const { return q_ == other.q_; }

private:
    std::uint64_t q_;
};

/// A residue bound to its field. Mixed-field arithmetic throws
/// std::invalid_argument.
struct FieldElement {
    std::uint64_t value = 0;
    std::uint64_t q = 0;

    bool operator==(const FieldElement&) const = default;
};

/// Canonical element of f with the given integer value (reduced mod q).
inline FieldElement element(const PrimeField& f, std::uint64_t value) {
    return {f.reduce(value), f.modulus()};
}

FieldElement operator+(FieldElement a, FieldElement b);
FieldElement operator-(FieldElement a, FieldElement b);
FieldElement operator*(FieldElement a, FieldElement b);

/// Inverse of a nonzero element.
FieldElement inv(FieldElement a);

/// a^e with e >= 0; a^0 == 1.
FieldElement pow(FieldElement a, std::uint64_t e);

/// True for any 64-bit prime (deterministic Miller-Rabin).
bool is_prime_u64(std::uint64_t n);

}  // namespace capsim
