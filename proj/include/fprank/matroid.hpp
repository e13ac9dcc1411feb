#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "fprank/matrix.hpp"
#include "fprank/rank.hpp"
#include "fprank/rng.hpp"

namespace fprank {

// Matrix whose columns are grouped positionally: columns 2i and 2i+1 form
// pair i.  The column count must be even.
struct PairedMatrix {
    DenseMatrix a;

    size_t pairs() const { return a.cols() / 2; }
};

// Throws std::invalid_argument on an odd column count.
void validate_paired(const PairedMatrix& a);

// Pairwise-disjoint column index sets, each one a basis (size = rank, and
// independent) of the matrix it was extracted from.
using BasisPartition = std::vector<IndexSet>;

// Row compression for matroid parity/intersection preprocessing: sketches
// the rows down to at most 22k while any fixed independent set of up to 2k
// columns stays independent with high probability.  Inputs that are already
// that flat come back unchanged; columns — and hence the pairing — are never
// touched.  k must be positive.
PairedMatrix parity_compress(const PrimeField& F, const PairedMatrix& a, size_t k, SplitRng rng);

// The (k * rows) x cols stack of k copies of A, every column of every copy
// scaled by a fresh uniform nonzero field element.  Zero columns stay zero,
// and rank(stack) <= min{k * rank(A), cols} always.  If A has k disjoint
// bases of size b, the stack has rank k * b with high probability, and any
// k * b independent stack columns index columns of A that split into k
// disjoint bases (again w.h.p.).  k must be positive.
DenseMatrix union_stack(const PrimeField& F, const DenseMatrix& a, size_t k, SplitRng rng);

// k pairwise-disjoint bases of A, or nullopt when fewer than k exist.  Rows
// are first compressed to O(b) with b = rank(A), then k * b independent
// columns of the scaled stack are located and split into k bases by
// augmenting-path exchanges over an elimination oracle.  Every returned
// partition is deterministically verified against A itself (disjoint parts,
// each of size b and rank b); failures retry with fresh randomness up to
// opts.retries times.  Monte Carlo: nullopt is correct with high
// probability, a returned partition always genuine.  A rank-0 matrix yields
// k empty bases.  k must be positive.
std::optional<BasisPartition> disjoint_bases(const PrimeField& F, const DenseMatrix& a, size_t k,
                                             SplitRng rng, RankOptions opts = {});

// Largest k admitting a verified partition, located by doubling and then
// binary search, never probing beyond the counting bound cols / rank.  A
// rank-0 matrix reports 0 with an empty partition.
std::pair<size_t, BasisPartition> max_disjoint_bases(const PrimeField& F, const DenseMatrix& a,
                                                     SplitRng rng, RankOptions opts = {});

} // namespace fprank
