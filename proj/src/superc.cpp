#include "fprank/superc.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_set>

#include "fprank/errors.hpp"

namespace fprank {

void validate_layered_dag(const LayeredDag& dag) {
    auto fail = [](const std::string& why) { throw std::invalid_argument("dag: " + why); };
    if (dag.n_vertices < 2) fail("needs at least a source and a sink vertex");

    const size_t ne = dag.edges.size();
    // first_out[v] / last_in[v] bound the edge-index ranges touching v.
    std::vector<size_t> first_out(dag.n_vertices, ne), last_in(dag.n_vertices, 0);
    std::vector<bool> has_in(dag.n_vertices, false), has_out(dag.n_vertices, false);
    for (size_t e = 0; e < ne; ++e) {
        auto [u, v] = dag.edges[e];
        if (u >= dag.n_vertices || v >= dag.n_vertices) fail("edge endpoint out of range");
        if (u == v) fail("self-loop");
        first_out[u] = std::min(first_out[u], e);
        has_out[u] = true;
        last_in[v] = std::max(last_in[v], e);
        has_in[v] = true;
    }
    for (size_t v = 0; v < dag.n_vertices; ++v)
        if (has_in[v] && has_out[v] && last_in[v] > first_out[v])
            fail("edge order is not topological");

    if (dag.inputs.size() != dag.outputs.size())
        fail("input and output edge counts differ");
    if (dag.inputs.empty()) fail("needs at least one input edge");

    std::unordered_set<size_t> seen;
    for (size_t e : dag.inputs) {
        if (e >= ne) fail("input edge index out of range");
        if (!seen.insert(e).second) fail("duplicate input edge");
    }
    seen.clear();
    for (size_t e : dag.outputs) {
        if (e >= ne) fail("output edge index out of range");
        if (!seen.insert(e).second) fail("duplicate output edge");
    }

    uint32_t source = dag.edges[dag.inputs[0]][0];
    for (size_t e : dag.inputs)
        if (dag.edges[e][0] != source) fail("input edges do not share one source");
    if (has_in[source]) fail("the source has incoming edges");

    uint32_t sink = dag.edges[dag.outputs[0]][1];
    for (size_t e : dag.outputs)
        if (dag.edges[e][1] != sink) fail("output edges do not share one sink");
    if (has_out[sink]) fail("the sink has outgoing edges");
    if (source == sink) fail("source and sink coincide");
}

LayeredDag trivial_superconcentrator(size_t n) {
    if (n == 0) throw std::invalid_argument("trivial_superconcentrator: n must be positive");
    // Vertices: 0 = source, 1..n = input layer, n+1..2n = output layer,
    // 2n+1 = sink.
    LayeredDag dag;
    dag.n_vertices = 2 * n + 2;
    dag.edges.reserve(2 * n + n * n);
    for (size_t i = 0; i < n; ++i) {
        dag.inputs.push_back(dag.edges.size());
        dag.edges.push_back({0, (uint32_t)(1 + i)});
    }
    for (size_t i = 0; i < n; ++i)
        for (size_t o = 0; o < n; ++o)
            dag.edges.push_back({(uint32_t)(1 + i), (uint32_t)(n + 1 + o)});
    for (size_t o = 0; o < n; ++o) {
        dag.outputs.push_back(dag.edges.size());
        dag.edges.push_back({(uint32_t)(n + 1 + o), (uint32_t)(2 * n + 1)});
    }
    return dag;
}

namespace {

// Shared propagation core; k is only bounded by the output count here, the
// public entry points enforce their own stronger limits.
DenseMatrix route_columns(const PrimeField& F, const SparseMatrix& a, size_t k,
                          const LayeredDag& dag, const EdgePairCoeff& coeff) {
    validate_layered_dag(dag);
    if (dag.inputs.size() != a.cols)
        throw std::invalid_argument("sc_compress: dag input count != column count");
    if (k > dag.outputs.size())
        throw std::invalid_argument("sc_compress: k exceeds the dag's output count");

    const size_t m = a.rows;
    const size_t ne = dag.edges.size();

    // Edge vectors, filled in edge order.  Input edges get A's columns.
    std::vector<std::vector<Fp>> vec(ne);
    std::vector<bool> is_input(ne, false);
    for (size_t j = 0; j < dag.inputs.size(); ++j) {
        auto& v = vec[dag.inputs[j]];
        v.assign(m, F.zero());
        is_input[dag.inputs[j]] = true;
    }
    for (const Triplet& t : a.entries) {
        auto& v = vec[dag.inputs[t.col]];
        v[t.row] = F.add(v[t.row], t.value);
    }

    // In-edge lists per vertex, in edge order (the sampling order of the
    // random coefficients is fixed by this double loop).
    std::vector<std::vector<size_t>> in_edges(dag.n_vertices);
    for (size_t e = 0; e < ne; ++e) in_edges[dag.edges[e][1]].push_back(e);

    for (size_t e = 0; e < ne; ++e) {
        if (is_input[e]) continue;
        auto& out = vec[e];
        out.assign(m, F.zero());
        for (size_t in : in_edges[dag.edges[e][0]]) {
            Fp c = coeff(in, e);
            if (c.v == 0) continue;
            const auto& src = vec[in];
            for (size_t i = 0; i < m; ++i) out[i] = F.add(out[i], F.mul(c, src[i]));
        }
    }

    DenseMatrix b(m, k);
    for (size_t j = 0; j < k; ++j) {
        const auto& v = vec[dag.outputs[j]];
        for (size_t i = 0; i < m; ++i) b.at(i, j) = v[i];
    }
    return b;
}

} // namespace

DenseMatrix sc_compress(const PrimeField& F, const SparseMatrix& a, size_t k,
                        const LayeredDag& dag, const EdgePairCoeff& coeff) {
    if (k > std::min(a.rows, a.cols))
        throw std::invalid_argument("sc_compress: k exceeds min(rows, cols)");
    return route_columns(F, a, k, dag, coeff);
}

DenseMatrix sc_compress(const PrimeField& F, const SparseMatrix& a, size_t k,
                        const LayeredDag& dag, SplitRng rng) {
    return sc_compress(F, a, k, dag,
                       [&](size_t, size_t) { return F.sample(rng); });
}

RankResult sc_rank(const PrimeField& F, const SparseMatrix& a, SplitRng rng) {
    const size_t m = a.rows, n = a.cols;
    if (m == 0 || n == 0) return {0, true};
    const size_t minside = std::min(m, n);

    // Two-sided compression.  Taking all n (then all m) output edges keeps
    // the full column space image, so every leading block of C is a
    // two-sided random restriction of A.
    SplitRng crng = rng.fork("cols");
    SplitRng rrng = rng.fork("rows");
    LayeredDag cols_dag = trivial_superconcentrator(n);
    DenseMatrix b = route_columns(F, a, n, cols_dag,
                                  [&](size_t, size_t) { return F.sample(crng); });
    LayeredDag rows_dag = trivial_superconcentrator(m);
    DenseMatrix c = route_columns(F, to_sparse(transpose(b)), m, rows_dag,
                                  [&](size_t, size_t) { return F.sample(rrng); });

    for (size_t k = 2;; k *= 2) {
        size_t kc = std::min(k, minside);
        IndexSet lead(kc);
        for (size_t i = 0; i < kc; ++i) lead[i] = i;
        size_t r = gauss_rank_value(F, submatrix(c, lead, lead));
        // r < kc: the block's rank stalled below the cap, so it equals the
        // full rank with high probability.  kc == minside: the estimate is
        // sandwiched by rank(C) <= rank(A) <= minside, hence exact.
        if (r < kc || kc == minside) return {r, kc == minside && r == kc};
    }
}

LayeredDag read_layered_dag(std::istream& in) {
    auto fail = [](const std::string& why) { throw io_error("dag file: " + why); };
    LayeredDag dag;
    size_t n_inputs = 0, n_outputs = 0, n_edges = 0;
    if (!(in >> dag.n_vertices >> n_inputs >> n_outputs))
        fail("missing header `n_vertices n_inputs n_outputs`");
    if (!(in >> n_edges)) fail("missing edge count");
    dag.edges.reserve(n_edges);
    for (size_t e = 0; e < n_edges; ++e) {
        uint32_t u = 0, v = 0;
        if (!(in >> u >> v)) fail("expected " + std::to_string(n_edges) + " edge lines");
        dag.edges.push_back({u, v});
    }
    dag.inputs.resize(n_inputs);
    for (auto& e : dag.inputs)
        if (!(in >> e)) fail("expected " + std::to_string(n_inputs) + " input edge indices");
    dag.outputs.resize(n_outputs);
    for (auto& e : dag.outputs)
        if (!(in >> e)) fail("expected " + std::to_string(n_outputs) + " output edge indices");
    try {
        validate_layered_dag(dag);
    } catch (const std::invalid_argument& e) {
        fail(e.what());
    }
    return dag;
}

void write_layered_dag(std::ostream& out, const LayeredDag& dag) {
    out << dag.n_vertices << ' ' << dag.inputs.size() << ' ' << dag.outputs.size() << '\n';
    out << dag.edges.size() << '\n';
    for (auto [u, v] : dag.edges) out << u << ' ' << v << '\n';
    for (size_t j = 0; j < dag.inputs.size(); ++j)
        out << dag.inputs[j] << (j + 1 == dag.inputs.size() ? '\n' : ' ');
    for (size_t j = 0; j < dag.outputs.size(); ++j)
        out << dag.outputs[j] << (j + 1 == dag.outputs.size() ? '\n' : ' ');
}

} // namespace fprank
