// Python bindings for the main operations.  Matrices cross the boundary as
// lists of integer rows (arbitrary ints, reduced into the field), graphs as
// (n, edge list) pairs, and all randomness is pinned by an explicit seed so
// results are reproducible across processes.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fprank/conn.hpp"
#include "fprank/dynrank.hpp"
#include "fprank/errors.hpp"
#include "fprank/ff.hpp"
#include "fprank/matching.hpp"
#include "fprank/matrix.hpp"
#include "fprank/matroid.hpp"
#include "fprank/rank.hpp"
#include "fprank/rng.hpp"
#include "fprank/superc.hpp"

namespace py = pybind11;
using namespace fprank;

namespace {

using Rows = std::vector<std::vector<long long>>;
using Edges = std::vector<std::pair<uint32_t, uint32_t>>;

DenseMatrix dense_from_rows(const PrimeField& F, const Rows& rows) {
    size_t m = rows.size();
    size_t n = m == 0 ? 0 : rows[0].size();
    for (const auto& r : rows)
        if (r.size() != n) throw std::invalid_argument("matrix rows must have equal length");
    DenseMatrix a(m, n);
    for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j < n; ++j) a.at(i, j) = F.from_int(rows[i][j]);
    return a;
}

SparseMatrix sparse_from_rows(const PrimeField& F, const Rows& rows) {
    return to_sparse(dense_from_rows(F, rows));
}

std::vector<std::vector<uint64_t>> rows_from_dense(const DenseMatrix& a) {
    std::vector<std::vector<uint64_t>> out(a.rows(), std::vector<uint64_t>(a.cols()));
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) out[i][j] = a.at(i, j).v;
    return out;
}

std::vector<Fp> vec_from_ints(const PrimeField& F, const std::vector<long long>& xs) {
    std::vector<Fp> out(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) out[i] = F.from_int(xs[i]);
    return out;
}

std::vector<uint64_t> ints_from_vec(const std::vector<Fp>& xs) {
    std::vector<uint64_t> out(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) out[i] = xs[i].v;
    return out;
}

Graph graph_from(size_t n, const Edges& edges) {
    Graph g;
    g.n = n;
    for (auto [u, v] : edges) g.edges.push_back({u, v});
    return g;
}

DiGraph digraph_from(size_t n, const Edges& edges) {
    DiGraph g;
    g.n = n;
    for (auto [u, v] : edges) g.edges.push_back({u, v});
    return g;
}

// Owning wrappers: each object carries its own field so Python callers only
// ever deal in plain integers.

struct PyDynRank {
    PrimeField F;
    DynRankState st;

    PyDynRank(const Rows& rows, uint64_t seed, uint64_t prime)
        : F(prime), st(F, dense_from_rows(F, rows), SplitRng(seed)) {}

    size_t rank() const { return st.rank_query(); }
    size_t rows() const { return st.rows(); }
    size_t cols() const { return st.cols(); }
    void rank_one_update(const std::vector<long long>& u, const std::vector<long long>& v) {
        st.rank_one_update(vec_from_ints(F, u), vec_from_ints(F, v));
    }
    void add_row(const std::vector<long long>& vals) { st.add_row(vec_from_ints(F, vals)); }
    void add_col(const std::vector<long long>& vals) { st.add_col(vec_from_ints(F, vals)); }
    void delete_row(size_t i) { st.delete_row(i); }
    void delete_col(size_t j) { st.delete_col(j); }
    std::vector<std::vector<uint64_t>> matrix() const { return rows_from_dense(st.logical_matrix()); }
};

struct PyConnectivity {
    PrimeField F;
    ConnectivityState st;

    PyConnectivity(size_t n, const Edges& edges, uint64_t seed, uint64_t prime)
        : F(prime), st(F, digraph_from(n, edges), SplitRng(seed)) {}

    size_t query(size_t s, size_t t) const { return st.edge_connectivity(s, t); }
    void add_edge(size_t u, size_t v) { st.add_edge(u, v); }
    void delete_edge(size_t u, size_t v) { st.delete_edge(u, v); }
    size_t vertex_count() const { return st.vertex_count(); }
    size_t edge_count() const { return st.edge_count(); }
};

} // namespace

PYBIND11_MODULE(_fprank, m) {
    m.doc() = "Exact randomized rank algorithms over a prime field";

    constexpr uint64_t kP = PrimeField::kDefaultPrime;
    m.attr("DEFAULT_PRIME") = kP;

    py::register_exception<verification_error>(m, "VerificationError");
    py::register_exception<io_error>(m, "IOError");

    m.def(
        "rank",
        [](const Rows& a, uint64_t seed, uint64_t prime) {
            PrimeField F(prime);
            return rank(F, sparse_from_rows(F, a), SplitRng(seed)).value;
        },
        py::arg("matrix"), py::arg("seed") = 0, py::arg("prime") = kP,
        "Exact rank with high probability.");

    m.def(
        "rank_atmost",
        [](const Rows& a, size_t k, uint64_t seed, uint64_t prime) {
            PrimeField F(prime);
            return rank_atmost(F, sparse_from_rows(F, a), k, SplitRng(seed)).value;
        },
        py::arg("matrix"), py::arg("k"), py::arg("seed") = 0, py::arg("prime") = kP,
        "min{rank, k} with one-sided error.");

    m.def(
        "sc_rank",
        [](const Rows& a, uint64_t seed, uint64_t prime) {
            PrimeField F(prime);
            return sc_rank(F, sparse_from_rows(F, a), SplitRng(seed)).value;
        },
        py::arg("matrix"), py::arg("seed") = 0, py::arg("prime") = kP,
        "Rank via routing-network compression.");

    m.def(
        "indep_cols",
        [](const Rows& a, size_t k, uint64_t seed, uint64_t prime, int retries) {
            PrimeField F(prime);
            return indep_cols(F, sparse_from_rows(F, a), k, SplitRng(seed),
                              RankOptions{true, retries});
        },
        py::arg("matrix"), py::arg("k"), py::arg("seed") = 0, py::arg("prime") = kP,
        py::arg("retries") = 3, "Indices of min{rank, k} independent columns (certified).");

    m.def(
        "nullspace",
        [](const Rows& a, uint64_t seed, uint64_t prime) {
            PrimeField F(prime);
            auto basis = nullspace_basis(F, sparse_from_rows(F, a), SplitRng(seed));
            std::vector<std::vector<uint64_t>> out;
            for (const auto& v : basis) out.push_back(ints_from_vec(v));
            return out;
        },
        py::arg("matrix"), py::arg("seed") = 0, py::arg("prime") = kP,
        "Vectors spanning the right nullspace.");

    m.def(
        "decompose",
        [](const Rows& a, uint64_t seed, uint64_t prime) {
            PrimeField F(prime);
            RankOneDecomposition d = rank_one_decompose(F, sparse_from_rows(F, a), SplitRng(seed));
            return py::make_tuple(rows_from_dense(d.B), rows_from_dense(d.C), d.S, d.T);
        },
        py::arg("matrix"), py::arg("seed") = 0, py::arg("prime") = kP,
        "Rank factorization (B, C, row_witnesses, column_basis) with A = B*C.");

    m.def(
        "lowrank_mul",
        [](const Rows& a, const Rows& b, uint64_t seed, uint64_t prime) {
            PrimeField F(prime);
            return rows_from_dense(
                lowrank_mul(F, sparse_from_rows(F, a), dense_from_rows(F, b), SplitRng(seed)));
        },
        py::arg("matrix_a"), py::arg("matrix_b"), py::arg("seed") = 0, py::arg("prime") = kP,
        "Product A*B through a rank factorization of A.");

    m.def(
        "matching_size",
        [](size_t n, const Edges& edges, std::optional<size_t> k, uint64_t seed, uint64_t prime) {
            PrimeField F(prime);
            Graph g = graph_from(n, edges);
            validate_graph(g);
            size_t cap = k.value_or(n / 2);
            if (cap == 0) return size_t(0);
            return matching_size(F, g, cap, SplitRng(seed));
        },
        py::arg("n"), py::arg("edges"), py::arg("k") = std::nullopt, py::arg("seed") = 0,
        py::arg("prime") = kP, "min{maximum matching size, k}; k defaults to n/2.");

    m.def(
        "find_matching",
        [](size_t n, const Edges& edges, std::optional<size_t> k, uint64_t seed, uint64_t prime,
           int retries) {
            PrimeField F(prime);
            Graph g = graph_from(n, edges);
            validate_graph(g);
            size_t cap = k.value_or(n / 2);
            Edges out;
            if (cap > 0)
                for (auto [u, v] : find_matching(F, g, cap, SplitRng(seed), RankOptions{true, retries}))
                    out.emplace_back(u, v);
            return out;
        },
        py::arg("n"), py::arg("edges"), py::arg("k") = std::nullopt, py::arg("seed") = 0,
        py::arg("prime") = kP, py::arg("retries") = 3,
        "A verified matching of size min{maximum, k}.");

    m.def(
        "subset_matching_size",
        [](size_t n, const Edges& edges, IndexSet subset, uint64_t seed, uint64_t prime) {
            PrimeField F(prime);
            Graph g = graph_from(n, edges);
            validate_graph(g);
            std::sort(subset.begin(), subset.end());
            if (std::adjacent_find(subset.begin(), subset.end()) != subset.end())
                throw std::invalid_argument("subset contains duplicate vertices");
            return subset_matching_size(F, g, subset, SplitRng(seed));
        },
        py::arg("n"), py::arg("edges"), py::arg("subset"), py::arg("seed") = 0,
        py::arg("prime") = kP, "How many of the given vertices one matching can cover.");

    m.def(
        "disjoint_bases",
        [](const Rows& a, size_t k, uint64_t seed, uint64_t prime,
           int retries) -> std::optional<BasisPartition> {
            PrimeField F(prime);
            return disjoint_bases(F, dense_from_rows(F, a), k, SplitRng(seed),
                                  RankOptions{true, retries});
        },
        py::arg("matrix"), py::arg("k"), py::arg("seed") = 0, py::arg("prime") = kP,
        py::arg("retries") = 3,
        "k disjoint column bases as index lists, or None if no packing was found.");

    m.def(
        "max_disjoint_bases",
        [](const Rows& a, uint64_t seed, uint64_t prime, int retries) {
            PrimeField F(prime);
            auto [k, parts] =
                max_disjoint_bases(F, dense_from_rows(F, a), SplitRng(seed), RankOptions{true, retries});
            return py::make_tuple(k, parts);
        },
        py::arg("matrix"), py::arg("seed") = 0, py::arg("prime") = kP, py::arg("retries") = 3,
        "Largest k with k disjoint column bases, and one such packing.");

    m.def(
        "edge_connectivity",
        [](size_t n, const Edges& edges, size_t s, size_t t, uint64_t seed, uint64_t prime) {
            PrimeField F(prime);
            ConnectivityState st(F, digraph_from(n, edges), SplitRng(seed));
            return st.edge_connectivity(s, t);
        },
        py::arg("n"), py::arg("edges"), py::arg("s"), py::arg("t"), py::arg("seed") = 0,
        py::arg("prime") = kP, "One-shot s-t edge connectivity of a digraph.");

    py::class_<PyDynRank>(m, "DynRank",
                          "Rank of a matrix maintained under rank-one updates and "
                          "row/column insertions and deletions.")
        .def(py::init<const Rows&, uint64_t, uint64_t>(), py::arg("matrix"), py::arg("seed") = 0,
             py::arg("prime") = kP)
        .def("rank", &PyDynRank::rank)
        .def("rows", &PyDynRank::rows)
        .def("cols", &PyDynRank::cols)
        .def("rank_one_update", &PyDynRank::rank_one_update, py::arg("u"), py::arg("v"))
        .def("add_row", &PyDynRank::add_row, py::arg("values"))
        .def("add_col", &PyDynRank::add_col, py::arg("values"))
        .def("delete_row", &PyDynRank::delete_row, py::arg("i"))
        .def("delete_col", &PyDynRank::delete_col, py::arg("j"))
        .def("matrix", &PyDynRank::matrix, "The current logical matrix as integer rows.");

    py::class_<PyConnectivity>(m, "Connectivity",
                               "All-pairs s-t edge connectivity of a digraph under "
                               "edge insertions and deletions.")
        .def(py::init<size_t, const Edges&, uint64_t, uint64_t>(), py::arg("n"), py::arg("edges"),
             py::arg("seed") = 0, py::arg("prime") = kP)
        .def("query", &PyConnectivity::query, py::arg("s"), py::arg("t"))
        .def("add_edge", &PyConnectivity::add_edge, py::arg("u"), py::arg("v"))
        .def("delete_edge", &PyConnectivity::delete_edge, py::arg("u"), py::arg("v"))
        .def("vertex_count", &PyConnectivity::vertex_count)
        .def("edge_count", &PyConnectivity::edge_count);
}
