#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "fprank/dynrank.hpp"
#include "fprank/matrix.hpp"
#include "fprank/rng.hpp"

namespace fprank {

// Simple directed graph on vertices 0..n-1: no self-loops, no parallel
// edges.  Opposite orientations of the same vertex pair are distinct edges.
struct DiGraph {
    size_t n = 0;
    std::vector<std::array<uint32_t, 2>> edges; // (tail, head)
};

// Throws std::invalid_argument on endpoints out of range, self-loops, or
// duplicate edges.
void validate_digraph(const DiGraph& g);

// All-pairs s-t edge connectivities of a simple digraph under edge
// insertions and deletions.  The state keeps an |E| x |E| matrix M with
// M[i][i] = -1 and M[i][j] a fresh uniform nonzero value whenever the head
// of e_i equals the tail of e_j, together with its inverse: the s-t edge
// connectivity equals rank((M^-1)[rows of edges leaving s, columns of edges
// entering t]) except with probability O(|E|^2 / p).  Each queried pair gets
// a dynamic-rank state over that inverse submatrix, maintained across edge
// updates: inserting or deleting an edge is a bordering step plus a rank-2
// correction of the inverse, which every pair state absorbs as at most one
// row and one column change plus two rank-one updates — O(|E|^2) field
// operations per update overall.
class ConnectivityState {
public:
    // Builds M with fresh values (resampling on the off chance it comes out
    // singular) and computes its inverse.  Pair states are materialized
    // lazily on first query.  Throws std::runtime_error when the resample
    // budget is exhausted, which a 61-bit prime never reaches in practice.
    ConnectivityState(const PrimeField& F, const DiGraph& g, SplitRng rng);

    size_t vertex_count() const { return n_; }
    size_t edge_count() const { return edges_.size(); }

    // Number of edge-disjoint directed s-t paths, correct w.h.p.
    // Throws std::invalid_argument unless s != t and both are in range.
    size_t edge_connectivity(size_t s, size_t t) const;

    // Insert a missing edge / remove a present edge; anything else throws
    // std::invalid_argument.  Every live pair state is updated in place.
    void add_edge(size_t u, size_t v);
    void delete_edge(size_t u, size_t v);

    // Test hook: recomputes M * M^-1 = I, the stencil structure of M, and
    // every pair state's agreement with the live inverse submatrix; throws
    // std::logic_error on the first violation.
    void check_invariants() const;

private:
    struct PairState {
        std::vector<size_t> row_edges; // edge index shown at each state row
        std::vector<size_t> col_edges; // edge index shown at each state column
        DynRankState st;
    };

    static uint64_t ekey(size_t u, size_t v) { return (uint64_t)u << 32 | (uint64_t)v; }

    std::vector<size_t> edges_with_tail(size_t s) const;
    std::vector<size_t> edges_with_head(size_t t) const;
    DenseMatrix inverse_submatrix(const std::vector<size_t>& rows,
                                  const std::vector<size_t>& cols) const;
    // Resamples M for the current edge list, inverts it, and rebuilds every
    // live pair state from scratch.
    void rebuild_all();

    PrimeField F_;
    mutable SplitRng rng_;
    size_t n_ = 0;
    std::vector<std::array<uint32_t, 2>> edges_;
    std::unordered_map<uint64_t, size_t> edge_at_; // (tail, head) -> index
    DenseMatrix m_;    // the edge-adjacency stencil with random entries
    DenseMatrix minv_; // its inverse, maintained across updates
    mutable std::map<std::pair<size_t, size_t>, PairState> states_;
    mutable size_t material_count_ = 0; // distinct rng forks per materialization
};

// Applies a mutation script to a starting digraph and returns the printed
// lines.  One operation per line:
//   ADD u v      insert edge u -> v
//   DEL u v      remove edge u -> v
//   QUERY s t    append one line with the s-t edge connectivity
//   QUERYALL     append n lines of n space-separated values (0 on the
//                diagonal: self-connectivity is not defined)
// Blank lines and lines starting with '#' are skipped.  Malformed lines and
// invalid operations raise io_error tagged with the line number.
std::vector<std::string> run_conn_script(const PrimeField& F, const DiGraph& start,
                                         std::istream& script, SplitRng rng);

} // namespace fprank
