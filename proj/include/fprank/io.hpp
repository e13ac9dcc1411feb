#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "fprank/matrix.hpp"

namespace fprank {

// Matrix Market coordinate format, integer field, general symmetry.
// Entries are 1-based on disk and reduced mod p on load (negatives allowed).
SparseMatrix read_matrix_market(const PrimeField& F, std::istream& in);
SparseMatrix read_matrix_market_file(const PrimeField& F, const std::string& path);
void write_matrix_market(const SparseMatrix& a, std::ostream& out);

// Plain edge-list graph file: first line "n m", then m lines "u v" with
// 0-based vertex ids.  Used for both undirected graphs (matching) and
// directed graphs (connectivity); the consumer decides the orientation.
struct RawGraph {
    size_t n = 0;
    std::vector<std::pair<size_t, size_t>> edges;
};

RawGraph read_graph(std::istream& in);
RawGraph read_graph_file(const std::string& path);

// Whitespace-separated list of 0-based vertex ids.
std::vector<size_t> read_vertex_set(std::istream& in);
std::vector<size_t> read_vertex_set_file(const std::string& path);

} // namespace fprank
