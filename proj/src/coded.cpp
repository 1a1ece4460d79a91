#include "capsim/coded.hpp"

#include <algorithm>
#include <set>

namespace capsim {

int recovery_threshold(const PartitionSpec& spec) {
    if (spec.m < 1 || spec.n < 1)
        throw std::invalid_argument("recovery_threshold: m and n must be >= 1");
    return spec.m * spec.n;
}

std::pair<std::vector<FieldMatrix>, std::vector<FieldMatrix>> partition(
    const FieldMatrix& a, const FieldMatrix& b, const PartitionSpec& spec) {
    recovery_threshold(spec);  // validates m, n
    if (!(a.field() == b.field()))
        throw std::invalid_argument("partition: A and B belong to different fields");
    if (a.rows() != b.rows())
        throw std::invalid_argument("partition: A and B must have the same row count");
    const std::size_t m = static_cast<std::size_t>(spec.m);
    const std::size_t n = static_cast<std::size_t>(spec.n);
    if (a.cols() % m != 0)
        throw std::invalid_argument("partition: m does not divide the column count of A");
    if (b.cols() % n != 0)
        throw std::invalid_argument("partition: n does not divide the column count of B");

    const std::size_t s = a.rows();
    const std::size_t wa = a.cols() / m;
    const std::size_t wb = b.cols() / n;
    std::vector<FieldMatrix> blocks_a;
    std::vector<FieldMatrix> blocks_b;
    blocks_a.reserve(m);
    blocks_b.reserve(n);
    for (std::size_t j = 0; j < m; ++j) {
        FieldMatrix blk(a.field(), s, wa);
        for (std::size_t r = 0; r < s; ++r)
            for (std::size_t c = 0; c < wa; ++c)
                blk.set_raw(r, c, a.raw(r, j * wa + c));
        blocks_a.push_back(std::move(blk));
    }
    for (std::size_t k = 0; k < n; ++k) {
        FieldMatrix blk(b.field(), s, wb);
        for (std::size_t r = 0; r < s; ++r)
            for (std::size_t c = 0; c < wb; ++c)
                blk.set_raw(r, c, b.raw(r, k * wb + c));
        blocks_b.push_back(std::move(blk));
    }
    return {std::move(blocks_a), std::move(blocks_b)};
}

std::vector<FieldElement> default_eval_points(const PrimeField& field, int count) {
    if (count < 1) throw std::invalid_argument("default_eval_points: count must be >= 1");
    if (static_cast<std::uint64_t>(count) >= field.modulus())
        throw std::invalid_argument(
            "default_eval_points: worker count must be below the field modulus");
    std::vector<FieldElement> points;
    points.reserve(static_cast<std::size_t>(count));
    for (int i = 1; i <= count; ++i)
        points.push_back(element(field, static_cast<std::uint64_t>(i)));
    return points;
}

std::vector<EncodedTask> encode(const std::vector<FieldMatrix>& blocks_a,
                                const std::vector<FieldMatrix>& blocks_b,
                                const std::vector<FieldElement>& eval_points) {
    if (blocks_a.empty() || blocks_b.empty())
        throw std::invalid_argument("encode: block lists must be nonempty");
    const PrimeField field = blocks_a.front().field();
    for (const auto& blk : blocks_a)
        if (!(blk.field() == field) || blk.rows() != blocks_a.front().rows() ||
            blk.cols() != blocks_a.front().cols())
            throw std::invalid_argument("encode: inconsistent A blocks");
    for (const auto& blk : blocks_b)
        if (!(blk.field() == field) || blk.rows() != blocks_a.front().rows() ||
            blk.cols() != blocks_b.front().cols())
            throw std::invalid_argument("encode: inconsistent B blocks");

    const std::size_t m = blocks_a.size();
    const std::size_t threshold = m * blocks_b.size();
    if (eval_points.size() < threshold)
        throw std::invalid_argument("encode: need at least m*n evaluation points");
    if (eval_points.size() >= field.modulus())
        throw std::invalid_argument("encode: more workers than nonzero field points");

    std::set<std::uint64_t> seen;
    for (const auto& p : eval_points) {
        if (p.q != field.modulus())
            throw std::invalid_argument("encode: evaluation point from a different field");
        if (p.value == 0)
            throw std::invalid_argument("encode: evaluation points must be nonzero");
        if (!seen.insert(p.value).second)
            throw std::invalid_argument("encode: duplicate evaluation point");
    }

    std::vector<EncodedTask> tasks;
    tasks.reserve(eval_points.size());
    for (std::size_t i = 0; i < eval_points.size(); ++i) {
        const std::uint64_t x = eval_points[i].value;
        FieldMatrix a_tilde(field, blocks_a.front().rows(), blocks_a.front().cols());
        FieldMatrix b_tilde(field, blocks_b.front().rows(), blocks_b.front().cols());
        std::uint64_t xj = 1;
        for (std::size_t j = 0; j < blocks_a.size(); ++j) {
            add_scaled_in_place(a_tilde, blocks_a[j], xj);
            xj = field.mul(xj, x);
        }
        const std::uint64_t xm = field.pow(x, static_cast<std::uint64_t>(m));
        std::uint64_t xkm = 1;
        for (std::size_t k = 0; k < blocks_b.size(); ++k) {
            add_scaled_in_place(b_tilde, blocks_b[k], xkm);
            xkm = field.mul(xkm, xm);
        }
        tasks.push_back(EncodedTask{static_cast<int>(i) + 1, eval_points[i],
                                    std::move(a_tilde), std::move(b_tilde)});
    }
    return tasks;
}

ComputedBlock worker_multiply(const EncodedTask& task, Exec exec) {
    return ComputedBlock{task.worker_id, task.eval_point,
                         transpose_multiply(task.a_tilde, task.b_tilde, exec)};
}

std::vector<ComputedBlock> run_workers(const std::vector<EncodedTask>& tasks, Exec exec) {
    if (exec == Exec::Serial) {
        std::vector<ComputedBlock> results;
        results.reserve(tasks.size());
        for (const auto& t : tasks) results.push_back(worker_multiply(t));
        return results;
    }
    const std::int64_t n = static_cast<std::int64_t>(tasks.size());
    std::vector<ComputedBlock> out;
    out.reserve(tasks.size());
    for (const auto& t : tasks)
        out.push_back(ComputedBlock{t.worker_id, t.eval_point,
                                    FieldMatrix(t.a_tilde.field(), 0, 0)});
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i)
        out[static_cast<std::size_t>(i)] = worker_multiply(tasks[static_cast<std::size_t>(i)]);
    return out;
}

namespace {

struct LagrangeBasis {
    // coeffs[i][l]: coefficient of x^l in the i-th basis polynomial
    std::vector<std::vector<std::uint64_t>> coeffs;
};

// Basis polynomials L_i(x) = prod_{j != i} (x - x_j) / (x_i - x_j) in
// coefficient form, via the node polynomial and synthetic division.
LagrangeBasis lagrange_basis(const PrimeField& f, const std::vector<std::uint64_t>& xs) {
    const std::size_t k = xs.size();
    std::vector<std::uint64_t> node(k + 1, 0);  // prod_i (x - x_i)
    node[0] = 1;
    std::size_t deg = 0;
    for (std::size_t i = 0; i < k; ++i) {
        const std::uint64_t neg_x = f.neg(xs[i]);
        ++deg;
        std::vector<std::uint64_t> next(k + 1, 0);
        for (std::size_t l = 0; l <= deg; ++l) {
            std::uint64_t c = l > 0 ? node[l - 1] : 0;  // shift: x * node
            c = f.add(c, f.mul(node[l], neg_x));
            next[l] = c;
        }
        node = std::move(next);
    }

    LagrangeBasis basis;
    basis.coeffs.assign(k, std::vector<std::uint64_t>(k, 0));
    for (std::size_t i = 0; i < k; ++i) {
        // divide node by (x - x_i)
        std::vector<std::uint64_t>& q = basis.coeffs[i];
        std::uint64_t carry = node[k];
        for (std::size_t l = k; l-- > 0;) {
            q[l] = carry;
            carry = f.add(node[l], f.mul(carry, xs[i]));
        }
        std::uint64_t denom = 1;
        for (std::size_t j = 0; j < k; ++j)
            if (j != i) denom = f.mul(denom, f.sub(xs[i], xs[j]));
        const std::uint64_t scale = f.inv(denom);
        for (std::size_t l = 0; l < k; ++l) q[l] = f.mul(q[l], scale);
    }
    return basis;
}

struct DecodeSetup {
    std::vector<const ComputedBlock*> used;  // exactly K, sorted by worker id
    LagrangeBasis basis;
    std::size_t block_rows = 0;
    std::size_t block_cols = 0;
};

DecodeSetup prepare_decode(const std::vector<ComputedBlock>& results,
                           const PartitionSpec& spec) {
    const int threshold = recovery_threshold(spec);
    if (results.size() < static_cast<std::size_t>(threshold))
        throw NotDecodableError(
            "not decodable: straggler threshold unmet (have " +
            std::to_string(results.size()) + " results, need " +
            std::to_string(threshold) + ")");

    DecodeSetup setup;
    setup.used.reserve(results.size());
    for (const auto& r : results) setup.used.push_back(&r);
    std::sort(setup.used.begin(), setup.used.end(),
              [](const ComputedBlock* a, const ComputedBlock* b) {
                  return a->worker_id < b->worker_id;
              });
    setup.used.resize(static_cast<std::size_t>(threshold));

    const PrimeField field = setup.used.front()->c_tilde.field();
    setup.block_rows = setup.used.front()->c_tilde.rows();
    setup.block_cols = setup.used.front()->c_tilde.cols();
    std::vector<std::uint64_t> xs;
    std::set<std::uint64_t> seen;
    for (const ComputedBlock* r : setup.used) {
        if (!(r->c_tilde.field() == field) || r->c_tilde.rows() != setup.block_rows ||
            r->c_tilde.cols() != setup.block_cols)
            throw std::invalid_argument("decode: inconsistent result blocks");
        if (!seen.insert(r->eval_point.value).second)
            throw std::invalid_argument("decode: duplicate evaluation points");
        xs.push_back(r->eval_point.value);
    }
    setup.basis = lagrange_basis(field, xs);
    return setup;
}

// Recover the coefficients for block entry (u, w) and scatter them into C.
void decode_entry(const DecodeSetup& setup, const PartitionSpec& spec,
                  const PrimeField& f, std::size_t u, std::size_t w,
                  FieldMatrix& out) {
    const std::size_t k = setup.used.size();
    std::vector<std::uint64_t> coef(k, 0);
    for (std::size_t i = 0; i < k; ++i) {
        const std::uint64_t y = setup.used[i]->c_tilde.raw(u, w);
        if (y == 0) continue;
        const auto& basis_i = setup.basis.coeffs[i];
        for (std::size_t l = 0; l < k; ++l)
            coef[l] = f.add(coef[l], f.mul(y, basis_i[l]));
    }
    // coefficient j + k*m holds entry (u, w) of block A_j^T B_k
    for (int kb = 0; kb < spec.n; ++kb)
        for (int jb = 0; jb < spec.m; ++jb) {
            const std::size_t l =
                static_cast<std::size_t>(jb) + static_cast<std::size_t>(kb) * spec.m;
            out.set_raw(static_cast<std::size_t>(jb) * setup.block_rows + u,
                        static_cast<std::size_t>(kb) * setup.block_cols + w, coef[l]);
        }
}

}  // namespace

FieldMatrix decode_serial(const std::vector<ComputedBlock>& results,
                          const PartitionSpec& spec) {
    DecodeSetup setup = prepare_decode(results, spec);
    const PrimeField f = setup.used.front()->c_tilde.field();
    FieldMatrix out(f, setup.block_rows * spec.m, setup.block_cols * spec.n);
    for (std::size_t u = 0; u < setup.block_rows; ++u)
        for (std::size_t w = 0; w < setup.block_cols; ++w)
            decode_entry(setup, spec, f, u, w, out);
    return out;
}

FieldMatrix decode(const std::vector<ComputedBlock>& results,
                   const PartitionSpec& spec, Exec exec) {
    if (exec == Exec::Serial) return decode_serial(results, spec);
    DecodeSetup setup = prepare_decode(results, spec);
    const PrimeField f = setup.used.front()->c_tilde.field();
    FieldMatrix out(f, setup.block_rows * spec.m, setup.block_cols * spec.n);
    const std::int64_t total =
        static_cast<std::int64_t>(setup.block_rows * setup.block_cols);
#pragma omp parallel for schedule(static)
    for (std::int64_t idx = 0; idx < total; ++idx) {
        const std::size_t u = static_cast<std::size_t>(idx) / setup.block_cols;
        const std::size_t w = static_cast<std::size_t>(idx) % setup.block_cols;
        decode_entry(setup, spec, f, u, w, out);
    }
    return out;
}

FieldMatrix end_to_end(const FieldMatrix& a, const FieldMatrix& b,
                       const PartitionSpec& spec, int workers,
                       const std::vector<int>& stragglers, Exec exec) {
    auto [blocks_a, blocks_b] = partition(a, b, spec);
    const auto points = default_eval_points(a.field(), workers);
    const auto tasks = encode(blocks_a, blocks_b, points);
    const auto all_results = run_workers(tasks, exec);
    std::vector<ComputedBlock> arrived;
    arrived.reserve(all_results.size());
    const std::set<int> dropped(stragglers.begin(), stragglers.end());
    for (const auto& r : all_results)
        if (!dropped.count(r.worker_id)) arrived.push_back(r);
    return decode(arrived, spec, exec);
}

}  // namespace capsim
