#include "fprank/matching.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <unordered_set>

#include "fprank/errors.hpp"

namespace fprank {

void validate_graph(const Graph& g) {
    std::unordered_set<uint64_t> seen;
    for (auto [u, v] : g.edges) {
        if (u >= g.n || v >= g.n)
            throw std::invalid_argument("graph: edge endpoint out of range");
        if (u == v) throw std::invalid_argument("graph: self-loop");
        uint64_t key = (uint64_t)std::min(u, v) << 32 | std::max(u, v);
        if (!seen.insert(key).second) throw std::invalid_argument("graph: duplicate edge");
    }
}

TutteMatrix tutte_matrix(const PrimeField& F, const Graph& g, SplitRng rng) {
    validate_graph(g);
    TutteMatrix t;
    t.a = SparseMatrix(g.n, g.n);
    t.edge_values.reserve(g.edges.size());
    for (auto [u, v] : g.edges) {
        Fp x = F.sample_nonzero(rng);
        t.edge_values.push_back(x);
        t.a.add(u, v, x);
        t.a.add(v, u, F.neg(x));
    }
    return t;
}

size_t matching_size(const PrimeField& F, const Graph& g, size_t k, SplitRng rng) {
    validate_graph(g);
    if (k == 0) throw std::invalid_argument("matching_size: k must be positive");
    if (g.edges.empty()) return 0;
    TutteMatrix t = tutte_matrix(F, g, rng.fork("tutte"));
    size_t r = rank_atmost(F, t.a, 2 * k, rng.fork("rank")).value;
    return r / 2;
}

EdgeList greedy_matching(const Graph& g) {
    validate_graph(g);
    std::vector<bool> used(g.n, false);
    EdgeList m;
    for (auto e : g.edges) {
        if (used[e[0]] || used[e[1]]) continue;
        used[e[0]] = used[e[1]] = true;
        m.push_back(e);
    }
    return m;
}

size_t subset_matching_size(const PrimeField& F, const Graph& g, const IndexSet& s,
                            SplitRng rng) {
    validate_graph(g);
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] >= g.n)
            throw std::invalid_argument("subset_matching_size: vertex out of range");
        if (i > 0 && s[i] <= s[i - 1])
            throw std::invalid_argument("subset_matching_size: set must be sorted and distinct");
    }
    if (s.empty() || g.edges.empty()) return 0;
    TutteMatrix t = tutte_matrix(F, g, rng.fork("tutte"));
    SparseMatrix rows = restrict_rows(t.a, s);
    return rank_atmost(F, rows, s.size(), rng.fork("rank")).value;
}

namespace {

// One extraction attempt; returns an edge set whose size the caller checks.
EdgeList extract_matching(const PrimeField& F, const Graph& g, size_t target,
                          SplitRng& rng) {
    // Pin down an induced subgraph of O(target) vertices that still carries
    // a matching of the target size: independent columns of the Tutte
    // matrix, then independent rows of that column restriction.
    TutteMatrix t = tutte_matrix(F, g, rng.fork("tutte"));
    IndexSet s = indep_cols(F, t.a, 2 * target, rng.fork("cols"));
    IndexSet r = indep_rows(F, restrict_cols(t.a, s), 2 * target, rng.fork("rows"));

    std::vector<bool> in_w(g.n, false);
    for (size_t v : s) in_w[v] = true;
    for (size_t v : r) in_w[v] = true;
    EdgeList pool;
    for (auto e : g.edges)
        if (in_w[e[0]] && in_w[e[1]]) pool.push_back(e);

    // Self-reduction: always probe the first pooled edge.  If the matching
    // size survives its deletion the edge is expendable; otherwise every
    // matching of the current size uses it, so it is matched and its
    // endpoints fall out of the pool.
    EdgeList matching;
    size_t current = target;
    size_t probe = 0;
    while (current > 0 && !pool.empty()) {
        auto e = pool.front();
        EdgeList rest(pool.begin() + 1, pool.end());
        size_t survived =
            matching_size(F, Graph{g.n, rest}, current, rng.fork("probe" + std::to_string(probe++)));
        if (survived == current) {
            pool = std::move(rest);
            continue;
        }
        matching.push_back(e);
        current -= 1;
        EdgeList next;
        for (auto f : rest)
            if (f[0] != e[0] && f[0] != e[1] && f[1] != e[0] && f[1] != e[1])
                next.push_back(f);
        pool = std::move(next);
    }
    return matching;
}

} // namespace

EdgeList find_matching(const PrimeField& F, const Graph& g, size_t k, SplitRng rng,
                       RankOptions opts) {
    validate_graph(g);
    if (k == 0) throw std::invalid_argument("find_matching: k must be positive");
    if (g.edges.empty()) return {};

    int attempts = 1 + std::max(0, opts.retries);
    for (int attempt = 0; attempt < attempts; ++attempt) {
        SplitRng arng = rng.fork("attempt" + std::to_string(attempt));
        size_t target = matching_size(F, g, k, arng.fork("size"));
        if (target == 0) return {};
        try {
            EdgeList m = extract_matching(F, g, target, arng);
            if (m.size() != target) continue;
            std::vector<bool> used(g.n, false);
            bool disjoint = true;
            for (auto e : m) {
                if (used[e[0]] || used[e[1]]) disjoint = false;
                used[e[0]] = used[e[1]] = true;
            }
            if (disjoint) return m;
        } catch (const verification_error&) {
            // a column/row extraction failed its own check; retry fresh
        }
    }
    throw verification_error("find_matching: failed to extract a matching of the computed size");
}

} // namespace fprank
