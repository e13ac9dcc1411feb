#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "fprank/ff.hpp"
#include "fprank/matrix.hpp"
#include "fprank/rank.hpp"
#include "fprank/rng.hpp"

namespace fprank {

// Simple undirected graph on vertices 0..n-1.
struct Graph {
    size_t n = 0;
    std::vector<std::array<uint32_t, 2>> edges;
};

using EdgeList = std::vector<std::array<uint32_t, 2>>;

// Throws std::invalid_argument on endpoints out of range, self-loops, or
// duplicate edges (in either orientation).
void validate_graph(const Graph& g);

// Skew-symmetric edge-variable matrix with fresh uniform nonzero values:
// entry (u, v) holds the edge value, (v, u) its negation, all else zero.
// Its rank is twice the maximum matching size except with probability
// O(n^2 / p) over the substitutions.
struct TutteMatrix {
    SparseMatrix a;              // n x n, two triplets per edge
    std::vector<Fp> edge_values; // aligned with the generating edge list
};

TutteMatrix tutte_matrix(const PrimeField& F, const Graph& g, SplitRng rng);

// min{maximum matching size, k}, computed as half the capped rank of a
// Tutte matrix instantiation.  Correct with high probability; never exceeds
// the true value.  k must be positive.
size_t matching_size(const PrimeField& F, const Graph& g, size_t k, SplitRng rng);

// A matching of size min{maximum matching size, k}: first the target size is
// computed, then independent column and row sets of the Tutte matrix pin
// down an induced subgraph of O(k) vertices that still carries such a
// matching, and a self-reduction extracts it one essential edge at a time
// (delete an edge if the matching size survives; otherwise match it and drop
// its endpoints).  The result is always vertex-disjoint; its size is
// verified against the target, retrying with fresh randomness up to
// opts.retries times before throwing verification_error.
EdgeList find_matching(const PrimeField& F, const Graph& g, size_t k, SplitRng rng,
                       RankOptions opts = {});

// Deterministic maximal matching (first fitting edge wins): at least half
// the maximum size, a seed for full-optimum runs via k = 2 * |result|.
EdgeList greedy_matching(const Graph& g);

// Maximum number of vertices of s that can be matched simultaneously: the
// rank of the rows of the Tutte matrix indexed by s (not halved).  s must be
// a sorted set of distinct vertices.
size_t subset_matching_size(const PrimeField& F, const Graph& g, const IndexSet& s,
                            SplitRng rng);

} // namespace fprank
