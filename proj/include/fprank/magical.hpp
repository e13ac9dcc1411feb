#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "fprank/matrix.hpp"
#include "fprank/rng.hpp"

namespace fprank {

// Bipartite multigraph on X (left) and Y (right) built as the union of two
// random perfect matchings on a padded copy of X, with the right side merged
// into |Y| groups of consecutive vertices.  Every X vertex has exactly two
// incident edges (kept as parallel edges when both land in the same group),
// and every Y vertex has degree at most 2 * ceil(|X| / |Y|).  Such a graph is
// (k, O(1/k))-matchable for |Y| = 11k: a fixed k-subset of X has a matching
// into Y with probability 1 - O(1/k).
struct MagicalGraph {
    size_t x_size = 0;
    size_t y_size = 0;
    std::vector<std::array<uint32_t, 2>> targets; // the two Y neighbors of each X vertex

    size_t y_degree(size_t y) const;
};

// Requires x_size >= y_size >= 1.
MagicalGraph gen_magical(size_t x_size, size_t y_size, SplitRng& rng);

// Linear sketch used by the rank pipeline.  When non-trivial, maps n source
// columns onto 11k target columns through a magical graph with fresh uniform
// edge coefficients; B_i = sum over edges (x_j, y_i) of c_e * A_j.
struct CompressionOperator {
    bool is_identity = true;
    size_t source_cols = 0;
    size_t target_cols = 0;
    MagicalGraph graph;                     // meaningful when !is_identity
    std::vector<std::array<Fp, 2>> coeffs;  // per X vertex, aligned with graph.targets

    // Union of the graph neighborhoods of the given target columns, as
    // source-column indices (sorted).  Identity operators lift to the input.
    IndexSet lift(const IndexSet& target_cols_set) const;
};

struct ColCompression {
    SparseMatrix matrix;
    CompressionOperator op;
};

// Column compression: returns A itself (identity operator) when cols <= 11k,
// otherwise an (rows x 11k) sketch with exactly 2 * nnz(A) triplets.
ColCompression compress_cols(const PrimeField& F, const SparseMatrix& a, size_t k, SplitRng& rng);

// Row compression is column compression of the transpose; the operator's
// graph ranges over source rows.
ColCompression compress_rows(const PrimeField& F, const SparseMatrix& a, size_t k, SplitRng& rng);

} // namespace fprank
