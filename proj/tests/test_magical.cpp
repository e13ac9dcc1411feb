#include "doctest.h"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "bipartite.hpp"
#include "fprank/magical.hpp"
#include "oracles.hpp"

using namespace fprank;
namespace oracle = fprank::testing;

namespace {

// matchability of a fixed left subset into Y, via the independent
// augmenting-path oracle
bool subset_matchable(const MagicalGraph& g, const IndexSet& subset) {
    std::vector<std::vector<uint32_t>> adj;
    adj.reserve(subset.size());
    for (size_t x : subset)
        adj.push_back({g.targets[x][0], g.targets[x][1]});
    return fprank::testing::max_bipartite_matching(adj, g.y_size) == subset.size();
}

IndexSet random_subset(size_t universe, size_t count, SplitRng& rng) {
    IndexSet s;
    while (s.size() < count) {
        size_t v = rng.below(universe);
        if (std::find(s.begin(), s.end(), v) == s.end()) s.push_back(v);
    }
    std::sort(s.begin(), s.end());
    return s;
}

} // namespace

TEST_CASE("degree invariants on pinned shapes") {
    SplitRng rng(61);

    MagicalGraph g = gen_magical(22, 11, rng);
    CHECK(g.targets.size() == 22); // two targets per x: degree exactly 2
    for (size_t y = 0; y < 11; ++y) CHECK(g.y_degree(y) <= 4);

    MagicalGraph sq = gen_magical(10, 10, rng);
    for (size_t y = 0; y < 10; ++y) CHECK(sq.y_degree(y) <= 2);
}

TEST_CASE("degree invariants across random shapes") {
    SplitRng rng(67);
    for (int trial = 0; trial < 100; ++trial) {
        size_t y = 1 + rng.below(20);
        size_t x = y + rng.below(60);
        MagicalGraph g = gen_magical(x, y, rng);
        size_t bound = 2 * ((x + y - 1) / y);
        REQUIRE(g.targets.size() == x);
        for (const auto& t : g.targets) {
            REQUIRE(t[0] < y);
            REQUIRE(t[1] < y);
        }
        size_t total = 0;
        for (size_t i = 0; i < y; ++i) {
            REQUIRE(g.y_degree(i) <= bound);
            total += g.y_degree(i);
        }
        CHECK(total == 2 * x);
    }
}

TEST_CASE("gen_magical rejects x smaller than y") {
    SplitRng rng(1);
    CHECK_THROWS_AS((void)gen_magical(3, 5, rng), std::invalid_argument);
    CHECK_THROWS_AS((void)gen_magical(3, 0, rng), std::invalid_argument);
}

TEST_CASE("fixed subsets are matchable at the advertised rate") {
    SplitRng rng(71);
    for (size_t k : {4, 8, 16}) {
        size_t y = 11 * k;
        size_t x = 4 * y;
        int failures = 0;
        const int trials = 500;
        for (int t = 0; t < trials; ++t) {
            SplitRng trial_rng = rng.fork("trial" + std::to_string(k) + "/" + std::to_string(t));
            IndexSet subset = random_subset(x, k, trial_rng);
            MagicalGraph g = gen_magical(x, y, trial_rng);
            if (!subset_matchable(g, subset)) ++failures;
        }
        // failure probability O(1/k); generous envelope to keep flake-free
        CHECK((double)failures / trials <= 2.0 / (double)k);
    }
}

TEST_CASE("compress_cols is the identity at or below the threshold") {
    PrimeField F;
    SplitRng rng(73);
    SparseMatrix a = oracle::random_sparse(F, 5, 33, 40, rng);
    ColCompression cc = compress_cols(F, a, 3, rng); // 33 == 11k
    CHECK(cc.op.is_identity);
    CHECK(cc.matrix.cols == 33);
    CHECK(to_dense(F, cc.matrix) == to_dense(F, a));
    // identity lift passes any subset through
    IndexSet s{0, 7, 31};
    CHECK(cc.op.lift(s) == s);
}

TEST_CASE("compress_cols keeps exactly two triplets per input triplet") {
    PrimeField F;
    SplitRng rng(79);
    SparseMatrix a = oracle::random_sparse(F, 6, 200, 150, rng);
    ColCompression cc = compress_cols(F, a, 2, rng);
    CHECK_FALSE(cc.op.is_identity);
    CHECK(cc.matrix.cols == 22);
    CHECK(cc.matrix.rows == 6);
    CHECK(cc.matrix.nnz() == 2 * a.nnz());
}

TEST_CASE("compression never raises the rank") {
    PrimeField F;
    SplitRng rng(83);
    for (int trial = 0; trial < 50; ++trial) {
        SparseMatrix a = oracle::random_sparse(F, 8, 120, 60, rng);
        ColCompression cc = compress_cols(F, a, 1, rng);
        CHECK(gauss_rank_value(F, to_dense(F, cc.matrix)) <=
              gauss_rank_value(F, to_dense(F, a)));
    }
}

TEST_CASE("compression preserves capped rank nearly always") {
    PrimeField F;
    SplitRng root(89);
    struct Shape {
        size_t m, n, r, k;
    };
    for (Shape s : {Shape{20, 300, 3, 3}, Shape{40, 500, 10, 10}, Shape{30, 200, 25, 8}}) {
        int hits = 0;
        const int trials = 500;
        for (int t = 0; t < trials; ++t) {
            SplitRng rng = root.fork(std::to_string(s.n) + "/" + std::to_string(t));
            DenseMatrix planted = oracle::random_dense_of_rank(F, s.m, s.n, s.r, rng);
            SparseMatrix a = to_sparse(planted);
            ColCompression cc = compress_cols(F, a, s.k, rng);
            size_t rb = gauss_rank_value(F, to_dense(F, cc.matrix));
            if (std::min(rb, s.k) == std::min(s.r, s.k)) ++hits;
        }
        CHECK((double)hits / trials >= 0.99);
    }
}

TEST_CASE("compress_rows is compress_cols of the transpose") {
    PrimeField F;
    SplitRng rng(97);
    SparseMatrix a = oracle::random_sparse(F, 150, 7, 100, rng);

    SplitRng r1 = rng.fork("same");
    SplitRng r2 = rng.fork("same");
    ColCompression rows = compress_rows(F, a, 2, r1);
    ColCompression cols = compress_cols(F, transpose(a), 2, r2);
    CHECK(rows.matrix.rows == 22);
    CHECK(rows.matrix.cols == 7);
    CHECK(to_dense(F, rows.matrix) == transpose(to_dense(F, cols.matrix)));
}

TEST_CASE("lift returns the graph neighborhood of the chosen targets") {
    PrimeField F;
    SplitRng rng(101);
    SparseMatrix a = oracle::random_sparse(F, 4, 60, 80, rng);
    ColCompression cc = compress_cols(F, a, 2, rng);
    REQUIRE_FALSE(cc.op.is_identity);

    IndexSet s{1, 5, 20};
    IndexSet lifted = cc.op.lift(s);
    CHECK(std::is_sorted(lifted.begin(), lifted.end()));
    for (size_t x = 0; x < 60; ++x) {
        bool touches = false;
        for (size_t y : s)
            touches = touches || cc.op.graph.targets[x][0] == y || cc.op.graph.targets[x][1] == y;
        bool present = std::find(lifted.begin(), lifted.end(), x) != lifted.end();
        CHECK(touches == present);
    }
}
