#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "capsim/exec.hpp"
#include "capsim/matrix.hpp"

namespace capsim {

/// Thrown when fewer results arrived than the recovery threshold requires.
class NotDecodableError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Column-block counts: A is split into m blocks, B into n blocks.
struct PartitionSpec {
    int m = 1;
    int n = 1;
};

/// Minimum number of worker results needed to reconstruct A^T B.
int recovery_threshold(const PartitionSpec& spec);

/// One worker's encoded inputs: evaluations of the coding polynomials at a
/// per-worker point.
struct EncodedTask {
    int worker_id = 0;
    FieldElement eval_point;
    FieldMatrix a_tilde;
    FieldMatrix b_tilde;
};

/// One worker's returned product a_tilde^T * b_tilde.
struct ComputedBlock {
    int worker_id = 0;
    FieldElement eval_point;
    FieldMatrix c_tilde;
};

/// Split A (s x r) into m column blocks and B (s x t) into n column blocks.
/// Requires m | r and n | t; concatenating the blocks restores the inputs.
std::pair<std::vector<FieldMatrix>, std::vector<FieldMatrix>> partition(
    const FieldMatrix& a, const FieldMatrix& b, const PartitionSpec& spec);

/// Evaluation points x_i = i for worker ids 1..count; requires count < q.
std::vector<FieldElement> default_eval_points(const PrimeField& field, int count);

/// Encode one task per evaluation point:
///   a_tilde_i = sum_j blocks_a[j] * x_i^j
///   b_tilde_i = sum_k blocks_b[k] * x_i^(k*m)
/// Points must be nonzero and pairwise distinct, and there must be at least
/// m*n of them.
std::vector<EncodedTask> encode(const std::vector<FieldMatrix>& blocks_a,
                                const std::vector<FieldMatrix>& blocks_b,
                                const std::vector<FieldElement>& eval_points);

/// The local computation a_tilde^T * b_tilde.
ComputedBlock worker_multiply(const EncodedTask& task, Exec exec = Exec::Serial);

/// All workers' computations; Parallel splits tasks across threads.
std::vector<ComputedBlock> run_workers(const std::vector<EncodedTask>& tasks,
                                       Exec exec = Exec::Parallel);

/// Reconstruct C = A^T B (r x t) from any m*n results with distinct
/// evaluation points. Exactly m*n results are used; extras are dropped after
/// sorting by worker id. Entry (u,w) of each result is an evaluation of a
/// degree m*n-1 polynomial whose coefficient j + k*m is entry (u,w) of
/// block A_j^T B_k; coefficients are recovered by Lagrange interpolation.
FieldMatrix decode(const std::vector<ComputedBlock>& results,
                   const PartitionSpec& spec, Exec exec = Exec::Parallel);
FieldMatrix decode_serial(const std::vector<ComputedBlock>& results,
                          const PartitionSpec& spec);

/// Full pipeline: partition, encode for `workers` workers, run the local
/// computations, drop the results of the workers in `stragglers` (1-based
/// ids), decode from the rest.
FieldMatrix end_to_end(const FieldMatrix& a, const FieldMatrix& b,
                       const PartitionSpec& spec, int workers,
                       const std::vector<int>& stragglers,
                       Exec exec = Exec::Parallel);

}  // namespace capsim
