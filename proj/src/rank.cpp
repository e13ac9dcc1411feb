#include "fprank/rank.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

#include "fprank/errors.hpp"

namespace fprank {

namespace {

// Exact integer ceil(n^{1/3}); column counts are small enough that the linear
// walk is free.
size_t cube_root_ceil(size_t n) {
    size_t r = 1;
    while (r * r * r < n) ++r;
    return r;
}

IndexSet prefix(const IndexSet& v, size_t count) {
    return IndexSet(v.begin(), v.begin() + std::min(count, v.size()));
}

} // namespace

RankResult rank_atmost(const PrimeField& F, const SparseMatrix& a, size_t k, SplitRng rng) {
    size_t kc = std::min(k, std::min(a.rows, a.cols));
    if (kc == 0) return {0, true};

    Normalized norm = normalize(F, a);
    const SparseMatrix& a0 = norm.matrix;
    if (a0.rows == 0 || a0.cols == 0) return {0, true};

    // Raising the parameter to cbrt(n) costs nothing asymptotically (the
    // compressed elimination stays O(n)) and shrinks the error probability.
    size_t k_eff = std::max(kc, cube_root_ceil(a0.cols));

    SplitRng col_rng = rng.fork("cols");
    ColCompression cc = compress_cols(F, a0, k_eff, col_rng);
    SplitRng row_rng = rng.fork("rows");
    ColCompression rc = compress_rows(F, cc.matrix, k_eff, row_rng);

    size_t r = gauss_rank_value(F, to_dense(F, rc.matrix));

    // The sketch is B = T·A·S for linear T, S, so r never exceeds rank(A):
    // the error is one-sided.  An estimate that hits the cap is provably
    // right, and an identity sketch (nothing was compressed) is plain exact
    // elimination.
    bool certified = (cc.op.is_identity && rc.op.is_identity) || r >= kc;
    return {std::min(r, kc), certified};
}

RankResult rank(const PrimeField& F, const SparseMatrix& a, SplitRng rng) {
    size_t minside = std::min(a.rows, a.cols);
    if (minside == 0) return {0, true};

    // Double the cap until the estimate stops hitting it.  Stopping early on
    // an under-estimate has probability O(1/k), dominated by the first round,
    // so start at a modest k rather than 1.
    size_t k = 8;
    for (int round = 0;; ++round, k *= 2) {
        size_t kc = std::min(k, minside);
        RankResult est = rank_atmost(F, a, kc, rng.fork("doubling" + std::to_string(round)));
        if (est.value < kc || kc == minside) return est;
    }
}

IndexSet indep_cols(const PrimeField& F, const SparseMatrix& a, size_t k, SplitRng rng,
                    RankOptions opts) {
    size_t kc = std::min(k, std::min(a.rows, a.cols));
    if (kc == 0) return {};

    Normalized norm = normalize(F, a);
    const SparseMatrix& a0 = norm.matrix;
    if (a0.rows == 0 || a0.cols == 0) return {};

    size_t k_eff = std::max(kc, cube_root_ceil(a0.cols));
    size_t cap = 11 * k_eff;

    int attempts = 1 + std::max(opts.retries, 0);
    for (int attempt = 0; attempt < attempts; ++attempt) {
        SplitRng arng = rng.fork("attempt" + std::to_string(attempt));

        // Candidate columns of a0, shrunk each round to the graph
        // neighborhood of a compressed rank profile.  The profile survives
        // the shrink w.h.p. while the candidate count drops geometrically.
        IndexSet live(a0.cols);
        std::iota(live.begin(), live.end(), 0);

        for (int round = 0; live.size() > cap; ++round) {
            SparseMatrix cur = restrict_cols(a0, live);
            std::string tag = "round" + std::to_string(round);
            if (cur.rows > cap) {
                SplitRng rrng = arng.fork(tag + "/rows");
                cur = compress_rows(F, cur, k_eff, rrng).matrix;
            }
            SplitRng crng = arng.fork(tag + "/cols");
            ColCompression cc = compress_cols(F, cur, k_eff, crng);
            GaussProfile prof = gauss_rank(F, to_dense(F, cc.matrix));
            IndexSet t = cc.op.lift(prefix(prof.col_profile, k_eff));
            if (t.empty() || t.size() >= live.size()) break; // no progress; solve directly
            IndexSet next(t.size());
            for (size_t i = 0; i < t.size(); ++i) next[i] = live[t[i]];
            live = std::move(next);
        }

        // Few enough candidates to eliminate directly.  Row compression
        // preserves the answer's validity: columns independent in T·A are
        // independent in A (any dependency of A's columns survives T).
        SparseMatrix cur = restrict_cols(a0, live);
        if (cur.rows > cap) {
            SplitRng rrng = arng.fork("final/rows");
            cur = compress_rows(F, cur, k_eff, rrng).matrix;
        }
        GaussProfile prof = gauss_rank(F, to_dense(F, cur));
        IndexSet picked = prefix(prof.col_profile, kc);
        IndexSet result(picked.size());
        for (size_t i = 0; i < picked.size(); ++i) result[i] = norm.col_map[live[picked[i]]];

        if (!opts.verify) return result;
        if (gauss_rank_value(F, to_dense(F, restrict_cols(a, result))) == result.size())
            return result;
    }
    throw verification_error("indep_cols: columns failed the independence check after "
                             + std::to_string(attempts) + " attempts");
}

IndexSet indep_rows(const PrimeField& F, const SparseMatrix& a, size_t k, SplitRng rng,
                    RankOptions opts) {
    return indep_cols(F, transpose(a), k, std::move(rng), opts);
}

RankOneDecomposition rank_one_decompose(const PrimeField& F, const SparseMatrix& a,
                                        SplitRng rng, RankOptions opts) {
    // Inner calls skip their own certification: the decomposition is checked
    // as a whole by multiplying back.
    RankOptions inner;
    inner.verify = false;
    inner.retries = 0;

    int attempts = 1 + std::max(opts.retries, 0);
    for (int attempt = 0; attempt < attempts; ++attempt) {
        SplitRng arng = rng.fork("attempt" + std::to_string(attempt));
        size_t r = rank(F, a, arng.fork("rank")).value;

        IndexSet t, s;
        if (r > 0) {
            t = indep_cols(F, a, r, arng.fork("cols"), inner);
            s = indep_rows(F, restrict_cols(a, t), t.size(), arng.fork("rows"), inner);
        }
        if (s.size() != t.size()) continue; // lost rank somewhere; reseed

        DenseMatrix b = to_dense(F, restrict_cols(a, t));
        DenseMatrix a_s = to_dense(F, restrict_rows(a, s));
        IndexSet all_s(s.size());
        std::iota(all_s.begin(), all_s.end(), 0);
        DenseMatrix c;
        try {
            c = multiply(F, inverse(F, submatrix(a_s, all_s, t)), a_s);
        } catch (const singular_matrix_error&) {
            continue; // the witness square was not invertible; reseed
        }

        RankOneDecomposition dec{std::move(b), std::move(c), std::move(s), std::move(t)};
        if (!opts.verify) return dec;
        if (multiply(F, dec.B, dec.C) == to_dense(F, a)) return dec;
    }
    throw verification_error("rank_one_decompose: product failed to reproduce the input after "
                             + std::to_string(attempts) + " attempts");
}

std::vector<std::vector<Fp>> nullspace_basis(const PrimeField& F, const SparseMatrix& a,
                                             SplitRng rng, RankOptions opts) {
    RankOneDecomposition dec = rank_one_decompose(F, a, rng.fork("decompose"), opts);

    size_t n = a.cols;
    std::vector<char> in_basis(n, 0);
    for (size_t col : dec.T) in_basis[col] = 1;

    // For each non-basis column j, the vector with 1 at j and -C[l][j] at
    // T[l] satisfies C·x = C_j - sum_l C[l][j]·e_l = 0, hence A·x = B·C·x = 0.
    std::vector<std::vector<Fp>> basis;
    basis.reserve(n - dec.T.size());
    for (size_t j = 0; j < n; ++j) {
        if (in_basis[j]) continue;
        std::vector<Fp> vec(n, F.zero());
        vec[j] = F.one();
        for (size_t l = 0; l < dec.T.size(); ++l) vec[dec.T[l]] = F.neg(dec.C.at(l, j));
        basis.push_back(std::move(vec));
    }
    return basis;
}

DenseMatrix lowrank_mul(const PrimeField& F, const SparseMatrix& a, const DenseMatrix& b,
                        SplitRng rng, RankOptions opts) {
    if (a.cols != b.rows())
        throw std::invalid_argument("lowrank_mul: inner dimensions disagree");
    RankOneDecomposition dec = rank_one_decompose(F, a, rng.fork("decompose"), opts);
    return multiply(F, dec.B, multiply(F, dec.C, b));
}

} // namespace fprank
