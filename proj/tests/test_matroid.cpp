#include "fprank/matroid.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "fprank/errors.hpp"
#include "oracles.hpp"

using namespace fprank;
using fprank::testing::random_dense;
using fprank::testing::random_dense_of_rank;

namespace {

const uint64_t kPrime = 2305843009213693951ULL;

DenseMatrix dense_from(const PrimeField& F, const std::vector<std::vector<long long>>& rows) {
    DenseMatrix a(rows.size(), rows[0].size());
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < rows[0].size(); ++j) a.at(i, j) = F.from_int(rows[i][j]);
    return a;
}

IndexSet all_rows_of(const DenseMatrix& a) {
    IndexSet r(a.rows());
    std::iota(r.begin(), r.end(), 0);
    return r;
}

size_t col_rank(const PrimeField& F, const DenseMatrix& a, const IndexSet& cols) {
    return gauss_rank_value(F, submatrix(a, all_rows_of(a), cols));
}

// Full re-verification on the test side: k parts, pairwise disjoint, each of
// size b with independent columns of a.
bool is_valid_partition(const PrimeField& F, const DenseMatrix& a, size_t k, size_t b,
                        const BasisPartition& parts) {
    if (parts.size() != k) return false;
    std::vector<bool> used(a.cols(), false);
    for (const IndexSet& part : parts) {
        if (part.size() != b) return false;
        for (size_t j : part) {
            if (j >= a.cols() || used[j]) return false;
            used[j] = true;
        }
        if (col_rank(F, a, part) != b) return false;
    }
    return true;
}

// Exhaustive maximum number of disjoint bases: enumerate every basis as a
// column bitmask, then take the best disjoint packing by memoized search
// over the set of still-available columns.
size_t max_disjoint_bases_oracle(const PrimeField& F, const DenseMatrix& a) {
    size_t n = a.cols();
    size_t b = gauss_rank_value(F, a);
    if (b == 0) return 0;
    std::vector<uint32_t> bases;
    for (uint32_t mask = 0; mask < (1u << n); ++mask) {
        if ((size_t)__builtin_popcount(mask) != b) continue;
        IndexSet cols;
        for (size_t j = 0; j < n; ++j)
            if (mask >> j & 1) cols.push_back(j);
        if (col_rank(F, a, cols) == b) bases.push_back(mask);
    }
    std::vector<int> memo(1u << n, -1);
    auto pack = [&](auto&& self, uint32_t avail) -> int {
        if (memo[avail] >= 0) return memo[avail];
        int best = 0;
        for (uint32_t bm : bases)
            if ((bm & avail) == bm) best = std::max(best, 1 + self(self, avail & ~bm));
        return memo[avail] = best;
    };
    return (size_t)pack(pack, (1u << n) - 1);
}

} // namespace

TEST_CASE("parity_compress: validation and no-op branch") {
    PrimeField F(kPrime);
    SplitRng rng(1);

    CHECK_THROWS_AS(validate_paired(PairedMatrix{DenseMatrix(3, 5)}), std::invalid_argument);
    CHECK_THROWS_AS(parity_compress(F, PairedMatrix{DenseMatrix(3, 5)}, 1, rng.fork("odd")),
                    std::invalid_argument);
    CHECK_THROWS_AS(parity_compress(F, PairedMatrix{DenseMatrix(3, 4)}, 0, rng.fork("k0")),
                    std::invalid_argument);

    // At most 22k rows: returned unchanged, including exactly at the cap.
    PairedMatrix small{random_dense(F, 10, 6, rng)};
    CHECK(parity_compress(F, small, 1, rng.fork("a")).a == small.a);
    PairedMatrix at_cap{random_dense(F, 22, 6, rng)};
    CHECK(parity_compress(F, at_cap, 1, rng.fork("b")).a == at_cap.a);

    // One row above the cap: sketched down to 22k rows, columns untouched.
    PairedMatrix tall{random_dense(F, 23, 6, rng)};
    PairedMatrix out = parity_compress(F, tall, 1, rng.fork("c"));
    CHECK(out.a.rows() == 22);
    CHECK(out.a.cols() == 6);
    CHECK(out.pairs() == 3);
}

TEST_CASE("parity_compress: planted independent pairs survive") {
    PrimeField F(kPrime);
    const size_t r = 50, pairs = 10, k = 2;

    size_t kept = 0, trials = 300;
    for (size_t seed = 0; seed < trials; ++seed) {
        SplitRng rng(900 + seed);
        // Columns 0..3 (pairs 0 and 1) independent; every other column lies
        // in their span, so the planted pairs are the only basis material.
        DenseMatrix planted = random_dense(F, r, 4, rng);
        REQUIRE(gauss_rank_value(F, planted) == 4);
        DenseMatrix a(r, 2 * pairs);
        for (size_t i = 0; i < r; ++i)
            for (size_t j = 0; j < 4; ++j) a.at(i, j) = planted.at(i, j);
        for (size_t j = 4; j < 2 * pairs; ++j) {
            Fp alpha = F.sample(rng), beta = F.sample(rng);
            for (size_t i = 0; i < r; ++i)
                a.at(i, j) = F.add(F.mul(alpha, a.at(i, 0)), F.mul(beta, a.at(i, 1)));
        }

        PairedMatrix out = parity_compress(F, PairedMatrix{a}, k, rng.fork("compress"));
        REQUIRE(out.a.rows() == 22 * k);
        REQUIRE(out.a.cols() == 2 * pairs);
        if (col_rank(F, out.a, {0, 1, 2, 3}) == 4) ++kept;
    }
    CHECK(kept >= 297); // 99% of 300
}

TEST_CASE("parity_compress: rank preserved up to the 2k cap") {
    PrimeField F(kPrime);
    const size_t k = 2;

    size_t ok_high = 0, ok_low = 0, trials = 300;
    for (size_t seed = 0; seed < trials; ++seed) {
        SplitRng rng(1700 + seed);
        // Rank above the cap: compressed rank must still reach 2k = 4.
        DenseMatrix high = random_dense_of_rank(F, 50, 20, 7, rng);
        DenseMatrix chigh = parity_compress(F, PairedMatrix{high}, k, rng.fork("h")).a;
        size_t rh = gauss_rank_value(F, chigh);
        CHECK(rh <= 7); // row sketching never raises rank
        if (rh >= 4) ++ok_high;

        // Rank below the cap: preserved exactly.
        DenseMatrix low = random_dense_of_rank(F, 50, 20, 3, rng);
        DenseMatrix clow = parity_compress(F, PairedMatrix{low}, k, rng.fork("l")).a;
        size_t rl = gauss_rank_value(F, clow);
        CHECK(rl <= 3);
        if (rl == 3) ++ok_low;
    }
    CHECK(ok_high >= 297);
    CHECK(ok_low >= 297);
}

TEST_CASE("union_stack: k = 1 rescales columns in place") {
    PrimeField F(kPrime);
    SplitRng rng(3);
    DenseMatrix a = random_dense(F, 4, 6, rng);
    for (size_t i = 0; i < 4; ++i) a.at(i, 2) = F.zero(); // one zero column

    DenseMatrix b = union_stack(F, a, 1, rng.fork("stack"));
    REQUIRE(b.rows() == 4);
    REQUIRE(b.cols() == 6);
    for (size_t j = 0; j < 6; ++j) {
        size_t lead = 4;
        for (size_t i = 0; i < 4; ++i)
            if (a.at(i, j).v != 0) {
                lead = i;
                break;
            }
        if (lead == 4) {
            for (size_t i = 0; i < 4; ++i) CHECK(b.at(i, j).v == 0);
            continue;
        }
        Fp ratio = F.mul(b.at(lead, j), F.inv(a.at(lead, j)));
        CHECK(ratio.v != 0);
        for (size_t i = 0; i < 4; ++i) CHECK(b.at(i, j).v == F.mul(ratio, a.at(i, j)).v);
    }
    CHECK(gauss_rank_value(F, b) == gauss_rank_value(F, a));

    CHECK_THROWS_AS(union_stack(F, a, 0, rng.fork("k0")), std::invalid_argument);
}

TEST_CASE("union_stack: duplicated identity reaches full stack rank") {
    PrimeField F(kPrime);
    DenseMatrix a = dense_from(F, {{1, 0, 1, 0}, {0, 1, 0, 1}}); // columns e1 e2 e1 e2

    size_t full = 0, trials = 300;
    for (size_t seed = 0; seed < trials; ++seed) {
        DenseMatrix b = union_stack(F, a, 2, SplitRng(2200 + seed));
        REQUIRE(b.rows() == 4);
        if (gauss_rank_value(F, b) == 4) ++full;
    }
    CHECK(full >= 297); // two disjoint bases exist, so the stack is full rank w.h.p.
}

TEST_CASE("union_stack: zero columns and the deterministic rank bound") {
    PrimeField F(kPrime);
    SplitRng rng(5);

    for (size_t trial = 0; trial < 30; ++trial) {
        SplitRng trng = rng.fork("t" + std::to_string(trial));
        size_t m = 1 + trng.below(4), n = 1 + trng.below(8);
        size_t r = trng.below(std::min(m, n) + 1);
        DenseMatrix a =
            r == 0 ? DenseMatrix(m, n) : random_dense_of_rank(F, m, n, r, trng);
        if (n > 1) // plant a zero column to exercise that branch too
            for (size_t i = 0; i < m; ++i) a.at(i, n - 1) = F.zero();
        size_t b_rank = gauss_rank_value(F, a);
        for (size_t k = 1; k <= 3; ++k) {
            DenseMatrix s = union_stack(F, a, k, trng.fork("k" + std::to_string(k)));
            REQUIRE(s.rows() == k * m);
            REQUIRE(s.cols() == n);
            CHECK(gauss_rank_value(F, s) <= std::min(k * b_rank, n));
            if (n > 1)
                for (size_t i = 0; i < s.rows(); ++i) CHECK(s.at(i, n - 1).v == 0);
        }
    }
}

TEST_CASE("disjoint_bases: pinned duplicated identity") {
    PrimeField F(kPrime);
    DenseMatrix a = dense_from(F, {{1, 0, 1, 0}, {0, 1, 0, 1}});

    auto got = disjoint_bases(F, a, 2, SplitRng(7));
    REQUIRE(got.has_value());
    CHECK(is_valid_partition(F, a, 2, 2, *got));
    // Each basis takes one copy of e1 (column 0 or 2) and one of e2: the only
    // partitions are {{0,1},{2,3}} and {{0,3},{1,2}}.
    bool split_a = *got == BasisPartition{{0, 1}, {2, 3}};
    bool split_b = *got == BasisPartition{{0, 3}, {1, 2}};
    CHECK((split_a || split_b));

    // Counting bound: three bases would need six columns.
    CHECK(!disjoint_bases(F, a, 3, SplitRng(8)).has_value());

    CHECK_THROWS_AS(disjoint_bases(F, a, 0, SplitRng(9)), std::invalid_argument);

    // Same seed, same answer.
    auto again = disjoint_bases(F, a, 2, SplitRng(7));
    REQUIRE(again.has_value());
    CHECK(*again == *got);
}

TEST_CASE("disjoint_bases: complete graph on four vertices") {
    PrimeField F(kPrime);
    // Incidence vectors e_u - e_v of the six edges of K4, last coordinate
    // dropped; independent column sets are exactly the spanning forests, so
    // bases are spanning trees and disjoint bases are edge-disjoint trees.
    DenseMatrix a = dense_from(F, {{1, 1, 1, 0, 0, 0},
                                   {-1, 0, 0, 1, 1, 0},
                                   {0, -1, 0, -1, 0, 1}});
    REQUIRE(gauss_rank_value(F, a) == 3);

    // Exhaustive ground truth: all ways to split the six edges into two
    // disjoint spanning trees.
    std::vector<BasisPartition> splits;
    for (uint32_t mask = 0; mask < 64; ++mask) {
        if (__builtin_popcount(mask) != 3 || !(mask & 1)) continue; // fix side of column 0
        IndexSet s, t;
        for (size_t j = 0; j < 6; ++j) (mask >> j & 1 ? s : t).push_back(j);
        if (col_rank(F, a, s) == 3 && col_rank(F, a, t) == 3)
            splits.push_back(BasisPartition{s, t});
    }
    REQUIRE(!splits.empty());

    auto got = disjoint_bases(F, a, 2, SplitRng(11));
    REQUIRE(got.has_value());
    CHECK(is_valid_partition(F, a, 2, 3, *got));
    CHECK(std::find(splits.begin(), splits.end(), *got) != splits.end());

    // Three trees would need nine edges.
    CHECK(!disjoint_bases(F, a, 3, SplitRng(12)).has_value());
}

TEST_CASE("disjoint_bases: rank-zero matrix yields empty bases") {
    PrimeField F(kPrime);
    DenseMatrix zero(3, 4);

    auto got = disjoint_bases(F, zero, 5, SplitRng(13));
    REQUIRE(got.has_value());
    CHECK(got->size() == 5);
    for (const IndexSet& part : *got) CHECK(part.empty());

    auto [opt, parts] = max_disjoint_bases(F, zero, SplitRng(14));
    CHECK(opt == 0);
    CHECK(parts.empty());
}

TEST_CASE("disjoint_bases: wide compressed instance") {
    PrimeField F(kPrime);
    SplitRng rng(15);
    // Tall enough that the row compression inside the pipeline is real
    // (50 > 11b), with 3 disjoint planted bases of size 2.
    DenseMatrix basis = random_dense(F, 50, 2, rng);
    REQUIRE(gauss_rank_value(F, basis) == 2);
    DenseMatrix a(50, 7);
    for (size_t copy = 0; copy < 3; ++copy)
        for (size_t j = 0; j < 2; ++j) {
            Fp scale = F.sample_nonzero(rng);
            for (size_t i = 0; i < 50; ++i)
                a.at(i, 2 * copy + j) = F.mul(scale, basis.at(i, j));
        }
    for (size_t i = 0; i < 50; ++i) a.at(i, 6) = basis.at(i, 0); // a seventh, spare column

    auto got = disjoint_bases(F, a, 3, SplitRng(16));
    REQUIRE(got.has_value());
    CHECK(is_valid_partition(F, a, 3, 2, *got));
}

TEST_CASE("max_disjoint_bases: pinned instances") {
    PrimeField F(kPrime);

    // Identity columns repeated three times: three disjoint bases, no more.
    DenseMatrix thrice = dense_from(F, {{1, 0, 0, 1, 0, 0, 1, 0, 0},
                                        {0, 1, 0, 0, 1, 0, 0, 1, 0},
                                        {0, 0, 1, 0, 0, 1, 0, 0, 1}});
    auto [opt3, parts3] = max_disjoint_bases(F, thrice, SplitRng(21));
    CHECK(opt3 == 3);
    CHECK(is_valid_partition(F, thrice, 3, 3, parts3));

    // A single basis: the counting bound allows two, but e2 appears once.
    DenseMatrix single = dense_from(F, {{1, 1, 1, 0}, {0, 0, 0, 1}});
    auto [opt1, parts1] = max_disjoint_bases(F, single, SplitRng(22));
    CHECK(opt1 == 1);
    CHECK(is_valid_partition(F, single, 1, 2, parts1));
    REQUIRE(parts1.size() == 1);
    CHECK(std::find(parts1[0].begin(), parts1[0].end(), 3) != parts1[0].end());

    // Square identity: exactly one basis fits.
    auto [opt_i, parts_i] = max_disjoint_bases(F, identity(3), SplitRng(23));
    CHECK(opt_i == 1);
    CHECK(is_valid_partition(F, identity(3), 1, 3, parts_i));
}

TEST_CASE("max_disjoint_bases: random instances match exhaustive packing") {
    PrimeField F(kPrime);
    SplitRng rng(31);

    for (size_t trial = 0; trial < 40; ++trial) {
        SplitRng trng = rng.fork("t" + std::to_string(trial));
        size_t m = 1 + trng.below(3), n = 1 + trng.below(10);
        // Draw columns from a small pool (zero, three random vectors, and a
        // fixed combination) so duplicate and dependent columns are common.
        DenseMatrix pool = random_dense(F, m, 3, trng);
        DenseMatrix a(m, n);
        for (size_t j = 0; j < n; ++j) {
            size_t pick = trng.below(5);
            for (size_t i = 0; i < m; ++i) {
                if (pick == 0) a.at(i, j) = F.zero();
                else if (pick <= 3) a.at(i, j) = pool.at(i, pick - 1);
                else a.at(i, j) = F.add(pool.at(i, 0), pool.at(i, 1));
            }
        }

        size_t want = max_disjoint_bases_oracle(F, a);
        auto [got, parts] = max_disjoint_bases(F, a, trng.fork("max"));
        CHECK(got == want);
        size_t b_rank = gauss_rank_value(F, a);
        if (b_rank > 0) {
            CHECK(is_valid_partition(F, a, got, b_rank, parts));
            if ((want + 1) * b_rank <= n) // beyond the optimum but inside the bound
                CHECK(!disjoint_bases(F, a, want + 1, trng.fork("over")).has_value());
        }
    }
}
