#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "fprank/ff.hpp"
#include "fprank/matrix.hpp"
#include "fprank/rank.hpp"
#include "fprank/rng.hpp"

namespace fprank {

// Acyclic routing network with designated input and output edges.  The
// routing guarantee behind the compression below is the superconcentrator
// property: for any equally sized S within the inputs and T within the
// outputs there are |S| vertex-disjoint paths from S to T.
struct LayeredDag {
    size_t n_vertices = 0;
    // (tail, head) pairs in a topological edge order: every edge into a
    // vertex appears before every edge out of it.  This also forces the
    // graph to be acyclic.
    std::vector<std::array<uint32_t, 2>> edges;
    std::vector<size_t> inputs;  // edge indices leaving the common source
    std::vector<size_t> outputs; // edge indices entering the common sink
};

// Throws std::invalid_argument describing the first structural violation:
// endpoints out of range, self-loops, edge order not topological, inputs not
// sharing a single source (or the source having incoming edges), outputs not
// sharing a single sink (or the sink having outgoing edges), duplicate or
// out-of-range designated edges, or |inputs| != |outputs|.
void validate_layered_dag(const LayeredDag& dag);

// The complete bipartite routing network on n inputs and n outputs (n^2
// middle edges).  Any k inputs reach any k outputs along k direct edges,
// which are vertex-disjoint, so the superconcentrator property holds
// exactly; what it gives up is the linear size of the recursive
// constructions, making the compression below cost Theta(n*m) field
// operations even on sparse input.
LayeredDag trivial_superconcentrator(size_t n);

// Mixing coefficient for a consecutive (incoming edge, outgoing edge) pair
// at a shared vertex, keyed by edge indices.
using EdgePairCoeff = std::function<Fp(size_t in_edge, size_t out_edge)>;

// Compress A (m x n) to B (m x k) by routing the columns of A through the
// dag: input edge j carries column j, every later edge carries the
// coefficient-weighted sum of the edges into its tail, and B collects the
// vectors of the first k output edges.  Coefficients are drawn uniformly
// from the rng; rank(B) <= min{rank(A), k} always (B's columns lie in A's
// column space), with equality except with probability O(n*m / p).
// Throws std::invalid_argument if the dag is malformed, the dag's input
// count differs from the column count, or k exceeds min(m, n).
DenseMatrix sc_compress(const PrimeField& F, const SparseMatrix& a, size_t k,
                        const LayeredDag& dag, SplitRng rng);

// Same propagation with caller-supplied coefficients.  Setting the 0/1
// indicator of k vertex-disjoint input-to-output paths reproduces the routed
// columns of A exactly.
DenseMatrix sc_compress(const PrimeField& F, const SparseMatrix& a, size_t k,
                        const LayeredDag& dag, const EdgePairCoeff& coeff);

// Rank via two-sided routing compression: compress A's columns to get B
// (m x n), compress B^T's columns to get C (n x m); with high probability
// every leading k x k block of C then has rank min{rank(A), k}, so the rank
// is found by doubling k until the block's rank stays below k.  The estimate
// never exceeds rank(A); `certified` is set when the doubling exhausted the
// smaller dimension, which makes the estimate exact unconditionally.
RankResult sc_rank(const PrimeField& F, const SparseMatrix& a, SplitRng rng);

// Plain-text dag format:
//   line 1: n_vertices n_inputs n_outputs
//   line 2: n_edges
//   then n_edges lines `tail head`,
//   then one line of n_inputs input edge indices,
//   then one line of n_outputs output edge indices.
// The reader validates the result and throws io_error on any defect.
LayeredDag read_layered_dag(std::istream& in);
void write_layered_dag(std::ostream& out, const LayeredDag& dag);

} // namespace fprank
