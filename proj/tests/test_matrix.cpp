#include "doctest.h"

#include "fprank/matrix.hpp"
#include "oracles.hpp"

using namespace fprank;
namespace oracle = fprank::testing;

namespace {

DenseMatrix from_rows(const PrimeField& F, std::vector<std::vector<long long>> rows) {
    DenseMatrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (size_t i = 0; i < m.rows(); ++i)
        for (size_t j = 0; j < m.cols(); ++j) m.at(i, j) = F.from_int(rows[i][j]);
    return m;
}

} // namespace

TEST_CASE("to_dense sums duplicate triplets") {
    PrimeField F(7);
    SparseMatrix a(1, 1);
    a.add(0, 0, Fp{1});
    a.add(0, 0, Fp{1});
    DenseMatrix d = to_dense(F, a);
    CHECK(d.at(0, 0).v == 2);
}

TEST_CASE("to_dense of empty triplet list is the zero matrix") {
    PrimeField F;
    SparseMatrix a(3, 4);
    DenseMatrix d = to_dense(F, a);
    for (size_t i = 0; i < 3; ++i)
        for (size_t j = 0; j < 4; ++j) CHECK(d.at(i, j) == F.zero());
}

TEST_CASE("dense-sparse round trip is identity") {
    PrimeField F;
    SplitRng rng(3);
    DenseMatrix d = oracle::random_dense(F, 5, 7, rng);
    CHECK(to_dense(F, to_sparse(d)) == d);
}

TEST_CASE("transpose round trips") {
    PrimeField F;
    SplitRng rng(4);
    DenseMatrix d = oracle::random_dense(F, 4, 6, rng);
    CHECK(transpose(transpose(d)) == d);
    SparseMatrix s = to_sparse(d);
    CHECK(to_dense(F, transpose(s)) == transpose(d));
}

TEST_CASE("gauss_rank on pinned cases") {
    PrimeField F;
    GaussProfile id3 = gauss_rank(F, identity(3));
    CHECK(id3.rank == 3);
    CHECK(id3.col_profile == IndexSet{0, 1, 2});
    CHECK(id3.row_profile == IndexSet{0, 1, 2});

    GaussProfile prop = gauss_rank(F, from_rows(F, {{1, 2}, {2, 4}}));
    CHECK(prop.rank == 1);
    CHECK(prop.col_profile == IndexSet{0});
    CHECK(prop.row_profile == IndexSet{0});
}

TEST_CASE("gauss_rank matches fraction-free integer elimination") {
    PrimeField F;
    SplitRng rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        auto m = oracle::random_int_matrix(8, 12, 2, rng);
        size_t expect = oracle::bareiss_rank(m);
        CHECK(gauss_rank_value(F, to_dense(F, oracle::lift_to_field(F, m))) == expect);
    }
}

TEST_CASE("gauss_rank equals rank of the transpose") {
    PrimeField F;
    SplitRng rng(18);
    for (int trial = 0; trial < 200; ++trial) {
        size_t m = 1 + rng.below(10), n = 1 + rng.below(10);
        size_t r = rng.below(std::min(m, n) + 1);
        DenseMatrix a = oracle::random_dense_of_rank(F, m, n, r, rng);
        CHECK(gauss_rank_value(F, a) == r);
        CHECK(gauss_rank_value(F, transpose(a)) == r);
    }
}

TEST_CASE("profiles are independent, spanning, and cross invertibly") {
    PrimeField F;
    SplitRng rng(19);
    for (int trial = 0; trial < 100; ++trial) {
        size_t m = 2 + rng.below(8), n = 2 + rng.below(8);
        size_t r = rng.below(std::min(m, n) + 1);
        DenseMatrix a = oracle::random_dense_of_rank(F, m, n, r, rng);
        GaussProfile prof = gauss_rank(F, a);
        REQUIRE(prof.rank == r);

        IndexSet all_rows(m);
        for (size_t i = 0; i < m; ++i) all_rows[i] = i;
        // independent and spanning: the profile columns alone carry rank r
        CHECK(gauss_rank_value(F, submatrix(a, all_rows, prof.col_profile)) == r);
        // the (row_profile, col_profile) square is invertible
        DenseMatrix cross = submatrix(a, prof.row_profile, prof.col_profile);
        CHECK(gauss_rank_value(F, cross) == r);
        if (r > 0) CHECK(multiply(F, inverse(F, cross), cross) == identity(r));
    }
}

TEST_CASE("rank_normal_form on pinned cases") {
    PrimeField F;

    RankNormalForm nf = rank_normal_form(F, from_rows(F, {{1, 0}, {0, 0}}));
    CHECK(nf.rank == 1);
    CHECK(nf.X == identity(2));
    CHECK(nf.Y == identity(2));

    DenseMatrix swapm = from_rows(F, {{0, 1}, {1, 0}});
    RankNormalForm nf2 = rank_normal_form(F, swapm);
    CHECK(nf2.rank == 2);
    CHECK(multiply(F, multiply(F, nf2.X, swapm), nf2.Y) == identity(2));
}

TEST_CASE("rank_normal_form properties on random matrices") {
    PrimeField F;
    SplitRng rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        size_t s = 1 + rng.below(8);
        size_t r = rng.below(s + 1);
        DenseMatrix b = oracle::random_dense_of_rank(F, s, s, r, rng);
        RankNormalForm nf = rank_normal_form(F, b);
        REQUIRE(nf.rank == r);
        CHECK(gauss_rank_value(F, nf.X) == s);
        CHECK(gauss_rank_value(F, nf.Y) == s);
        DenseMatrix d = multiply(F, multiply(F, nf.X, b), nf.Y);
        for (size_t i = 0; i < s; ++i)
            for (size_t j = 0; j < s; ++j)
                CHECK(d.at(i, j) == ((i == j && i < r) ? F.one() : F.zero()));
    }
}

TEST_CASE("inverse on pinned cases") {
    PrimeField F7(7);
    CHECK(inverse(F7, identity(4)) == identity(4));
    DenseMatrix d = from_rows(F7, {{2, 0}, {0, 3}});
    DenseMatrix dinv = inverse(F7, d);
    CHECK(dinv.at(0, 0).v == 4);
    CHECK(dinv.at(1, 1).v == 5);
    CHECK(dinv.at(0, 1).v == 0);
    CHECK(dinv.at(1, 0).v == 0);
}

TEST_CASE("inverse of random nonsingular matrices multiplies back to identity") {
    PrimeField F;
    SplitRng rng(29);
    for (int trial = 0; trial < 50; ++trial) {
        DenseMatrix m = oracle::random_dense(F, 10, 10, rng);
        if (gauss_rank_value(F, m) < 10) continue; // essentially never
        DenseMatrix minv = inverse(F, m);
        CHECK(multiply(F, m, minv) == identity(10));
        CHECK(multiply(F, minv, m) == identity(10));
    }
}

TEST_CASE("inverse rejects singular input") {
    PrimeField F;
    CHECK_THROWS_AS((void)inverse(F, from_rows(F, {{1, 2}, {2, 4}})), singular_matrix_error);
}

TEST_CASE("woodbury_update on pinned cases") {
    PrimeField F;
    size_t n = 4;

    // M = I, U = V = e1: (I + e1 e1^T)^{-1} = I - (1/2) e1 e1^T
    DenseMatrix u(n, 1), v(n, 1);
    u.at(0, 0) = F.one();
    v.at(0, 0) = F.one();
    DenseMatrix upd = woodbury_update(F, identity(n), u, v);
    DenseMatrix expect = identity(n);
    expect.at(0, 0) = F.sub(F.one(), F.inv(F.from_uint(2)));
    CHECK(upd == expect);

    // U = 0 leaves the inverse unchanged
    DenseMatrix zero_u(n, 2), anything(n, 2);
    SplitRng rng(31);
    DenseMatrix m = oracle::random_dense(F, n, n, rng);
    DenseMatrix minv = inverse(F, m);
    CHECK(woodbury_update(F, minv, zero_u, anything) == minv);
}

TEST_CASE("woodbury_update matches direct inversion on random rank-2 updates") {
    PrimeField F;
    SplitRng rng(37);
    for (int trial = 0; trial < 50; ++trial) {
        size_t n = 2 + rng.below(9);
        DenseMatrix m = oracle::random_dense(F, n, n, rng);
        if (gauss_rank_value(F, m) < n) continue;
        DenseMatrix u = oracle::random_dense(F, n, 2, rng);
        DenseMatrix v = oracle::random_dense(F, n, 2, rng);
        DenseMatrix sum = add(F, m, multiply(F, u, transpose(v)));
        if (gauss_rank_value(F, sum) < n) continue;

        WoodburyFactors fac = woodbury_update_factored(F, inverse(F, m), u, v);
        CHECK(fac.new_inverse == inverse(F, sum));
        CHECK(woodbury_update(F, inverse(F, m), u, v) == fac.new_inverse);
        // the factored form reproduces the update: new = old + W Z^T
        DenseMatrix rebuilt = add(F, inverse(F, m), multiply(F, fac.W, transpose(fac.Z)));
        CHECK(rebuilt == fac.new_inverse);
    }
}

TEST_CASE("woodbury_update flags a singular result") {
    PrimeField F;
    size_t n = 3;
    DenseMatrix u(n, 1), v(n, 1);
    u.at(0, 0) = F.one();
    v.at(0, 0) = F.neg(F.one()); // I - e1 e1^T is singular
    CHECK_THROWS_AS((void)woodbury_update(F, identity(n), u, v), singular_matrix_error);
}

TEST_CASE("normalize strips zero rows and columns") {
    PrimeField F(7);
    SparseMatrix a(4, 5);
    a.add(1, 1, Fp{3});
    a.add(1, 3, Fp{2});
    a.add(1, 3, Fp{5}); // sums to zero: column 3 is logically empty
    a.add(3, 1, Fp{4});
    Normalized norm = normalize(F, a);
    CHECK(norm.matrix.rows == 2);
    CHECK(norm.matrix.cols == 1);
    CHECK(norm.row_map == std::vector<size_t>{1, 3});
    CHECK(norm.col_map == std::vector<size_t>{1});
    DenseMatrix d = to_dense(F, norm.matrix);
    CHECK(d.at(0, 0).v == 3);
    CHECK(d.at(1, 0).v == 4);
}

TEST_CASE("normalize of an all-zero matrix is empty") {
    PrimeField F;
    SparseMatrix a(3, 3);
    Normalized norm = normalize(F, a);
    CHECK(norm.matrix.rows == 0);
    CHECK(norm.matrix.cols == 0);
    CHECK(norm.matrix.nnz() == 0);
}

TEST_CASE("normalize preserves rank") {
    PrimeField F;
    SplitRng rng(41);
    for (int trial = 0; trial < 50; ++trial) {
        SparseMatrix a = oracle::random_sparse(F, 8, 10, 12, rng);
        Normalized norm = normalize(F, a);
        CHECK(gauss_rank_value(F, to_dense(F, norm.matrix)) ==
              gauss_rank_value(F, to_dense(F, a)));
    }
}

TEST_CASE("restrict and submatrix agree") {
    PrimeField F;
    SplitRng rng(43);
    DenseMatrix d = oracle::random_dense(F, 6, 9, rng);
    SparseMatrix s = to_sparse(d);
    IndexSet rows{1, 4, 5}, cols{0, 2, 3, 8};
    IndexSet all_rows{0, 1, 2, 3, 4, 5};
    IndexSet all_cols{0, 1, 2, 3, 4, 5, 6, 7, 8};
    CHECK(to_dense(F, restrict_rows(s, rows)) == submatrix(d, rows, all_cols));
    CHECK(to_dense(F, restrict_cols(s, cols)) == submatrix(d, all_rows, cols));
}
