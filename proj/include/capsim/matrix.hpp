#pragma once

#include <cstddef>
#include <vector>

#include "capsim/exec.hpp"
#include "capsim/field.hpp"
#include "capsim/rng.hpp"

namespace capsim {

/// Dense row-major matrix over a prime field. Entries are canonical residues.
class FieldMatrix {
public:
    FieldMatrix(const PrimeField& field, std::size_t rows, std::size_t cols)
        : field_(field), rows_(rows), cols_(cols), v_(rows * cols, 0) {}

    static FieldMatrix random(const PrimeField& field, std::size_t rows,
                              std::size_t cols, Rng& rng);

    const PrimeField& field() const { return field_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    std::uint64_t raw(std::size_t r, std::size_t c) const { return v_[r * cols_ + c]; }
    void set_raw(std::size_t r, std::size_t c, std::uint64_t value) {
        v_[r * cols_ + c] = value;
    }

    FieldElement at(std::size_t r, std::size_t c) const {
        return {raw(r, c), field_.modulus()};
    }
    void set(std::size_t r, std::size_t c, FieldElement e);

    const std::vector<std::uint64_t>& data() const { return v_; }

    bool operator==(const FieldMatrix& other) const {
        return field_ == other.field_ && rows_ == other.rows_ &&
               cols_ == other.cols_ && v_ == other.v_;
    }

private:
    PrimeField field_;
    std::size_t rows_;
    std::size_t cols_;
    std::vector<std::uint64_t> v_;
};

/// C = A^T * B over the common field. A is s x r, B is s x t, C is r x t.
/// The Parallel policy splits the output rows across OpenMP threads;
/// transpose_multiply_serial is the plain-loop reference.
FieldMatrix transpose_multiply(const FieldMatrix& a, const FieldMatrix& b,
                               Exec exec = Exec::Parallel);
FieldMatrix transpose_multiply_serial(const FieldMatrix& a, const FieldMatrix& b);

/// this += other * scalar, entrywise; shapes and fields must match.
void add_scaled_in_place(FieldMatrix& acc, const FieldMatrix& other,
                         std::uint64_t scalar);

}  // namespace capsim
