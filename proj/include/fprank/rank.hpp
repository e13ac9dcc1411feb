#pragma once

#include <vector>

#include "fprank/magical.hpp"
#include "fprank/matrix.hpp"
#include "fprank/rng.hpp"

namespace fprank {

struct RankOptions {
    bool verify = true; // certify randomized answers where a cheap exact check exists
    int retries = 3;    // extra attempts after a failed certification
};

struct RankResult {
    size_t value = 0;
    bool certified = false;
};

// min{rank(A), k} with one-sided error O(1/k): compress columns to 11k', then
// rows, then eliminate, where k' = max(k, ceil(cols^{1/3})).  k larger than
// min(m, n) is clamped.  Monte Carlo; no certification pass.
RankResult rank_atmost(const PrimeField& F, const SparseMatrix& a, size_t k, SplitRng rng);

// Exact rank w.h.p. by doubling k until the capped estimate stops being tight.
RankResult rank(const PrimeField& F, const SparseMatrix& a, SplitRng rng);

// Indices (into A) of min{rank(A), k} linearly independent columns.  Shrinks
// the candidate set through compressed rank profiles and graph-neighborhood
// lifting until at most 11k' columns remain, then reads the profile directly.
// With opts.verify, the returned set is certified by exact elimination on the
// restriction of A and the whole pipeline retried on failure; throws
// verification_error when the retry budget runs out.
IndexSet indep_cols(const PrimeField& F, const SparseMatrix& a, size_t k, SplitRng rng,
                    RankOptions opts = {});
IndexSet indep_rows(const PrimeField& F, const SparseMatrix& a, size_t k, SplitRng rng,
                    RankOptions opts = {});

// A = B * C with B = A[:, T] (m x r) and C = (A[S, T])^{-1} A[S, :] (r x n),
// so C restricted to T is the identity.  Certified by multiplying back.
struct RankOneDecomposition {
    DenseMatrix B;
    DenseMatrix C;
    IndexSet S; // row witnesses
    IndexSet T; // column basis
};

RankOneDecomposition rank_one_decompose(const PrimeField& F, const SparseMatrix& a,
                                        SplitRng rng, RankOptions opts = {});

// n - rank(A) vectors spanning {x : A x = 0}; exact once the decomposition
// is certified (each vector annihilates C, hence A = B C, identically).
std::vector<std::vector<Fp>> nullspace_basis(const PrimeField& F, const SparseMatrix& a,
                                             SplitRng rng, RankOptions opts = {});

// A * B in O(n^2 r) once A is decomposed as (m x r) * (r x n).
DenseMatrix lowrank_mul(const PrimeField& F, const SparseMatrix& a, const DenseMatrix& b,
                        SplitRng rng, RankOptions opts = {});

} // namespace fprank
