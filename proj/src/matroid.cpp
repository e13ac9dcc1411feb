#include "fprank/matroid.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <numeric>
#include <stdexcept>
#include <string>

#include "fprank/magical.hpp"

namespace fprank {

void validate_paired(const PairedMatrix& a) {
    if (a.a.cols() % 2 != 0)
        throw std::invalid_argument("paired matrix: column count must be even");
}

PairedMatrix parity_compress(const PrimeField& F, const PairedMatrix& a, size_t k, SplitRng rng) {
    validate_paired(a);
    if (k == 0) throw std::invalid_argument("parity_compress: k must be positive");
    ColCompression cc = compress_rows(F, to_sparse(a.a), 2 * k, rng);
    return PairedMatrix{to_dense(F, cc.matrix)};
}

DenseMatrix union_stack(const PrimeField& F, const DenseMatrix& a, size_t k, SplitRng rng) {
    if (k == 0) throw std::invalid_argument("union_stack: k must be positive");
    size_t m = a.rows(), n = a.cols();
    DenseMatrix b(k * m, n);
    for (size_t i = 0; i < k; ++i) {
        for (size_t j = 0; j < n; ++j) {
            Fp x = F.sample_nonzero(rng);
            for (size_t t = 0; t < m; ++t) b.at(i * m + t, j) = F.mul(x, a.at(t, j));
        }
    }
    return b;
}

namespace {

// Coefficients expressing column `target` of a in the span of the listed
// columns, or nullopt when it lies outside (the listed columns plus target
// are independent).  The listed columns must themselves be independent,
// which makes the coefficients unique: Gauss-Jordan turns the listed block
// into an identity on the pivot rows, and the target column then reads off
// the combination directly.
std::optional<std::vector<Fp>> in_span(const PrimeField& F, const DenseMatrix& a,
                                       const std::vector<size_t>& cols, size_t target) {
    size_t m = a.rows(), s = cols.size();
    DenseMatrix w(m, s + 1);
    for (size_t i = 0; i < m; ++i) {
        for (size_t t = 0; t < s; ++t) w.at(i, t) = a.at(i, cols[t]);
        w.at(i, s) = a.at(i, target);
    }
    for (size_t j = 0; j < s; ++j) {
        size_t p = j;
        while (p < m && w.at(p, j).v == 0) ++p;
        assert(p < m && "in_span: listed columns are dependent");
        if (p != j)
            for (size_t t = j; t <= s; ++t) std::swap(w.at(p, t), w.at(j, t));
        Fp piv = F.inv(w.at(j, j));
        for (size_t t = j; t <= s; ++t) w.at(j, t) = F.mul(piv, w.at(j, t));
        for (size_t i = 0; i < m; ++i) {
            if (i == j || w.at(i, j).v == 0) continue;
            Fp f = w.at(i, j);
            for (size_t t = j; t <= s; ++t)
                w.at(i, t) = F.sub(w.at(i, t), F.mul(f, w.at(j, t)));
        }
    }
    for (size_t i = s; i < m; ++i)
        if (w.at(i, s).v != 0) return std::nullopt;
    std::vector<Fp> coeff(s);
    for (size_t j = 0; j < s; ++j) coeff[j] = w.at(j, s);
    return coeff;
}

// Splits all columns of a into k independent sets by the classical
// augmenting-path scheme: to place a column, search breadth-first over
// exchange steps — a displaced column enters a part outright when the part
// stays independent, and otherwise may push out any column of the circuit
// it closes there.  Applying a shortest path of exchanges keeps every part
// independent.  Returns nullopt when some column admits no augmenting path,
// i.e. the columns do not split into k independent sets.
std::optional<BasisPartition> partition_columns(const PrimeField& F, const DenseMatrix& a,
                                                size_t k) {
    size_t n = a.cols();
    BasisPartition parts(k);
    std::vector<int> part_of(n, -1);

    for (size_t e = 0; e < n; ++e) {
        std::vector<int> parent(n, -1);
        std::vector<bool> seen(n, false);
        seen[e] = true;
        std::deque<size_t> queue{e};
        int enter_part = -1;
        size_t enter_elem = 0;
        while (!queue.empty() && enter_part < 0) {
            size_t x = queue.front();
            queue.pop_front();
            for (size_t i = 0; i < k; ++i) {
                if ((int)i == part_of[x]) continue;
                auto lambda = in_span(F, a, parts[i], x);
                if (!lambda) {
                    enter_part = (int)i;
                    enter_elem = x;
                    break;
                }
                for (size_t t = 0; t < parts[i].size(); ++t) {
                    size_t y = parts[i][t];
                    if ((*lambda)[t].v == 0 || seen[y]) continue;
                    seen[y] = true;
                    parent[y] = (int)x;
                    queue.push_back(y);
                }
            }
        }
        if (enter_part < 0) return std::nullopt;

        // Walk the path from its far end: the final column enters the free
        // part, and each predecessor takes the slot its successor vacated.
        size_t x = enter_elem;
        int dest = enter_part;
        while (true) {
            int src = part_of[x];
            if (src >= 0) {
                auto& from = parts[src];
                from.erase(std::find(from.begin(), from.end(), x));
            }
            parts[dest].push_back(x);
            part_of[x] = dest;
            if (parent[x] < 0) break;
            dest = src;
            x = (size_t)parent[x];
        }
    }
    return parts;
}

// Deterministic acceptance gate for a candidate partition: k parts, sizes
// all b, globally disjoint, and every part independent in the original
// matrix (checked by plain elimination, no randomness).
bool verify_partition(const PrimeField& F, const DenseMatrix& a, size_t k, size_t b,
                      const BasisPartition& parts) {
    if (parts.size() != k) return false;
    IndexSet all_rows(a.rows());
    std::iota(all_rows.begin(), all_rows.end(), 0);
    std::vector<bool> used(a.cols(), false);
    for (const IndexSet& part : parts) {
        if (part.size() != b) return false;
        for (size_t j : part) {
            if (j >= a.cols() || used[j]) return false;
            used[j] = true;
        }
        if (gauss_rank_value(F, submatrix(a, all_rows, part)) != b) return false;
    }
    return true;
}

} // namespace

std::optional<BasisPartition> disjoint_bases(const PrimeField& F, const DenseMatrix& a, size_t k,
                                             SplitRng rng, RankOptions opts) {
    if (k == 0) throw std::invalid_argument("disjoint_bases: k must be positive");
    size_t b = rank(F, to_sparse(a), rng.fork("b")).value;
    if (b == 0) return BasisPartition(k); // every part is the empty basis
    if (k * b > a.cols()) return std::nullopt; // counting bound: not enough columns

    int attempts = 1 + std::max(0, opts.retries);
    for (int t = 0; t < attempts; ++t) {
        SplitRng arng = rng.fork("attempt" + std::to_string(t));
        SplitRng crng = arng.fork("compress");
        DenseMatrix ap = to_dense(F, compress_rows(F, to_sparse(a), b, crng).matrix);
        DenseMatrix stack = union_stack(F, ap, k, arng.fork("stack"));
        IndexSet s = indep_cols(F, to_sparse(stack), k * b, arng.fork("cols"), opts);
        if (s.size() < k * b) return std::nullopt; // stack rank too low: no k bases w.h.p.

        IndexSet ap_rows(ap.rows());
        std::iota(ap_rows.begin(), ap_rows.end(), 0);
        auto local = partition_columns(F, submatrix(ap, ap_rows, s), k);
        if (!local) continue; // the surviving columns did not split; re-randomize

        BasisPartition result(k);
        for (size_t i = 0; i < k; ++i) {
            result[i].reserve((*local)[i].size());
            for (size_t idx : (*local)[i]) result[i].push_back(s[idx]);
            std::sort(result[i].begin(), result[i].end());
        }
        std::sort(result.begin(), result.end());
        if (!verify_partition(F, a, k, b, result)) continue;
        return result;
    }
    return std::nullopt;
}

std::pair<size_t, BasisPartition> max_disjoint_bases(const PrimeField& F, const DenseMatrix& a,
                                                     SplitRng rng, RankOptions opts) {
    size_t b = rank(F, to_sparse(a), rng.fork("b")).value;
    if (b == 0) return {0, {}};
    size_t cap = a.cols() / b;

    size_t lo = 0, hi = cap + 1; // lo: largest verified k; hi: smallest failing k
    BasisPartition best;
    for (size_t k = 1; k <= cap;) {
        auto got = disjoint_bases(F, a, k, rng.fork("dbl" + std::to_string(k)), opts);
        if (!got) {
            hi = k;
            break;
        }
        lo = k;
        best = std::move(*got);
        if (k == cap) break;
        k = std::min(2 * k, cap);
    }
    while (lo + 1 < hi) {
        size_t mid = lo + (hi - lo) / 2;
        auto got = disjoint_bases(F, a, mid, rng.fork("bin" + std::to_string(mid)), opts);
        if (got) {
            lo = mid;
            best = std::move(*got);
        } else {
            hi = mid;
        }
    }
    return {lo, std::move(best)};
}

} // namespace fprank
