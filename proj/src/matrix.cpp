#include "capsim/matrix.hpp"

#include <stdexcept>

namespace capsim {

FieldMatrix FieldMatrix::random(const PrimeField& field, std::size_t rows,
                                std::size_t cols, Rng& rng) {
    FieldMatrix m(field, rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            m.set_raw(r, c, field.reduce(rng.next_u64()));
    return m;
}

void FieldMatrix::set(std::size_t r, std::size_t c, FieldElement e) {
    if (e.q != field_.modulus())
        throw std::invalid_argument("FieldMatrix: element from a different field");
    set_raw(r, c, e.value);
}

namespace {

void check_product_shapes(const FieldMatrix& a, const FieldMatrix& b) {
    if (!(a.field() == b.field()))
        throw std::invalid_argument("transpose_multiply: field mismatch");
    if (a.rows() != b.rows())
        throw std::invalid_argument("transpose_multiply: row-count mismatch");
}

inline void product_row(const FieldMatrix& a, const FieldMatrix& b,
                        const PrimeField& f, std::size_t i, FieldMatrix& out) {
    const std::size_t s = a.rows();
    const std::size_t t = b.cols();
    for (std::size_t j = 0; j < t; ++j) {
        std::uint64_t acc = 0;
        for (std::size_t k = 0; k < s; ++k)
            acc = f.add(acc, f.mul(a.raw(k, i), b.raw(k, j)));
        out.set_raw(i, j, acc);
    }
}

}  // namespace

FieldMatrix transpose_multiply_serial(const FieldMatrix& a, const FieldMatrix& b) {
    check_product_shapes(a, b);
    const PrimeField f = a.field();
    FieldMatrix out(f, a.cols(), b.cols());
    for (std::size_t i = 0; i < a.cols(); ++i) product_row(a, b, f, i, out);
    return out;
}

FieldMatrix transpose_multiply(const FieldMatrix& a, const FieldMatrix& b, Exec exec) {
    if (exec == Exec::Serial) return transpose_multiply_serial(a, b);
    check_product_shapes(a, b);
    const PrimeField f = a.field();
    FieldMatrix out(f, a.cols(), b.cols());
    const std::int64_t n = static_cast<std::int64_t>(a.cols());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i)
        product_row(a, b, f, static_cast<std::size_t>(i), out);
    return out;
}

void add_scaled_in_place(FieldMatrix& acc, const FieldMatrix& other,
                         std::uint64_t scalar) {
    if (!(acc.field() == other.field()))
        throw std::invalid_argument("add_scaled_in_place: field mismatch");
    if (acc.rows() != other.rows() || acc.cols() != other.cols())
        throw std::invalid_argument("add_scaled_in_place: shape mismatch");
    const PrimeField f = acc.field();
    for (std::size_t r = 0; r < acc.rows(); ++r)
        for (std::size_t c = 0; c < acc.cols(); ++c)
            acc.set_raw(r, c, f.add(acc.raw(r, c), f.mul(other.raw(r, c), scalar)));
}

}  // namespace capsim
