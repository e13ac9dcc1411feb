#pragma once

#include <vector>

#include "fprank/ff.hpp"
#include "fprank/matrix.hpp"
#include "fprank/rng.hpp"

namespace fprank::testing {

// Fraction-free integer elimination (Bareiss), sharing no code with the
// field kernels.  Meant for small matrices with single-digit entries: every
// intermediate value is a minor of the input, so it stays far below 2^127
// and far below the field characteristic — a nonzero minor over the integers
// is then nonzero mod p as well, and the two ranks agree.
size_t bareiss_rank(const std::vector<std::vector<long long>>& m);

std::vector<std::vector<long long>> random_int_matrix(size_t rows, size_t cols,
                                                      long long bound, SplitRng& rng);

// Reduce an integer matrix into the field (negative entries wrap).
SparseMatrix lift_to_field(const PrimeField& F, const std::vector<std::vector<long long>>& m);

DenseMatrix random_dense(const PrimeField& F, size_t rows, size_t cols, SplitRng& rng);

// R (rows x r) times C (r x cols) with uniform entries.  The factors are
// full-rank except with probability O(r^2/p), which never happens at this
// field size, so the product has rank exactly r.
DenseMatrix random_dense_of_rank(const PrimeField& F, size_t rows, size_t cols, size_t r,
                                 SplitRng& rng);

// Planted-rank sparse matrix: r random patterns of nnz_per_row entries each,
// every row a fresh nonzero multiple of one pattern, each pattern used at
// least once (rows >= r required).
SparseMatrix random_sparse_of_rank(const PrimeField& F, size_t rows, size_t cols, size_t r,
                                   size_t nnz_per_row, SplitRng& rng);

// Uniform sparse matrix with exactly nnz triplets at distinct positions.
SparseMatrix random_sparse(const PrimeField& F, size_t rows, size_t cols, size_t nnz,
                           SplitRng& rng);

} // namespace fprank::testing
