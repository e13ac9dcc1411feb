#include "fprank/matrix.hpp"

#include <unordered_map>
#include <utility>

namespace fprank {

SparseMatrix transpose(const SparseMatrix& a) {
    SparseMatrix t(a.cols, a.rows);
    t.entries.reserve(a.entries.size());
    for (const Triplet& e : a.entries) t.entries.push_back(Triplet{e.col, e.row, e.value});
    return t;
}

DenseMatrix transpose(const DenseMatrix& a) {
    DenseMatrix t(a.cols(), a.rows());
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) t.at(j, i) = a.at(i, j);
    return t;
}

DenseMatrix to_dense(const PrimeField& F, const SparseMatrix& a) {
    DenseMatrix d(a.rows, a.cols);
    for (const Triplet& e : a.entries) d.at(e.row, e.col) = F.add(d.at(e.row, e.col), e.value);
    return d;
}

SparseMatrix to_sparse(const DenseMatrix& a) {
    SparseMatrix s(a.rows(), a.cols());
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j)
            if (a.at(i, j).v != 0) s.add(i, j, a.at(i, j));
    return s;
}

DenseMatrix identity(size_t n) {
    DenseMatrix d(n, n);
    for (size_t i = 0; i < n; ++i) d.at(i, i) = Fp{1};
    return d;
}

DenseMatrix multiply(const PrimeField& F, const DenseMatrix& a, const DenseMatrix& b) {
    assert(a.cols() == b.rows());
    DenseMatrix c(a.rows(), b.cols());
    for (size_t i = 0; i < a.rows(); ++i) {
        for (size_t k = 0; k < a.cols(); ++k) {
            Fp f = a.at(i, k);
            if (f.v == 0) continue;
            const Fp* brow = b.row_ptr(k);
            Fp* crow = c.row_ptr(i);
            for (size_t j = 0; j < b.cols(); ++j) crow[j] = F.add(crow[j], F.mul(f, brow[j]));
        }
    }
    return c;
}

DenseMatrix add(const PrimeField& F, const DenseMatrix& a, const DenseMatrix& b) {
    assert(a.rows() == b.rows() && a.cols() == b.cols());
    DenseMatrix c(a.rows(), a.cols());
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) c.at(i, j) = F.add(a.at(i, j), b.at(i, j));
    return c;
}

DenseMatrix submatrix(const DenseMatrix& a, const IndexSet& rows, const IndexSet& cols) {
    DenseMatrix s(rows.size(), cols.size());
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < cols.size(); ++j) s.at(i, j) = a.at(rows[i], cols[j]);
    return s;
}

SparseMatrix restrict_rows(const SparseMatrix& a, const IndexSet& rows) {
    std::unordered_map<uint32_t, uint32_t> pos;
    pos.reserve(rows.size());
    for (size_t i = 0; i < rows.size(); ++i) pos.emplace((uint32_t)rows[i], (uint32_t)i);
    SparseMatrix r(rows.size(), a.cols);
    for (const Triplet& e : a.entries) {
        auto it = pos.find(e.row);
        if (it != pos.end()) r.entries.push_back(Triplet{it->second, e.col, e.value});
    }
    return r;
}

SparseMatrix restrict_cols(const SparseMatrix& a, const IndexSet& cols) {
    std::unordered_map<uint32_t, uint32_t> pos;
    pos.reserve(cols.size());
    for (size_t j = 0; j < cols.size(); ++j) pos.emplace((uint32_t)cols[j], (uint32_t)j);
    SparseMatrix r(a.rows, cols.size());
    for (const Triplet& e : a.entries) {
        auto it = pos.find(e.col);
        if (it != pos.end()) r.entries.push_back(Triplet{e.row, it->second, e.value});
    }
    return r;
}

namespace {

// Left-to-right elimination returning the lexicographically-first independent
// column set.  Greedy over a linear matroid is exact, so the profile does not
// depend on which rows become pivots.
std::pair<size_t, IndexSet> eliminate_col_profile(const PrimeField& F, DenseMatrix m) {
    const size_t rows = m.rows(), cols = m.cols();
    std::vector<char> used(rows, 0);
    IndexSet profile;
    for (size_t j = 0; j < cols; ++j) {
        size_t pivot = rows;
        for (size_t i = 0; i < rows; ++i) {
            if (!used[i] && m.at(i, j).v != 0) {
                pivot = i;
                break;
            }
        }
        if (pivot == rows) continue;
        used[pivot] = 1;
        profile.push_back(j);
        Fp pinv = F.inv(m.at(pivot, j));
        const Fp* prow = m.row_ptr(pivot);
        for (size_t i = 0; i < rows; ++i) {
            if (used[i] || m.at(i, j).v == 0) continue;
            Fp f = F.mul(m.at(i, j), pinv);
            Fp* irow = m.row_ptr(i);
            for (size_t t = j; t < cols; ++t) irow[t] = F.sub(irow[t], F.mul(f, prow[t]));
        }
        if (profile.size() == rows) break;
    }
    return {profile.size(), profile};
}

} // namespace

size_t gauss_rank_value(const PrimeField& F, const DenseMatrix& a) {
    return eliminate_col_profile(F, a).first;
}

GaussProfile gauss_rank(const PrimeField& F, const DenseMatrix& a) {
    GaussProfile g;
    auto [r, cp] = eliminate_col_profile(F, a);
    auto [rt, rp] = eliminate_col_profile(F, transpose(a));
    assert(r == rt);
    g.rank = r;
    g.col_profile = std::move(cp);
    g.row_profile = std::move(rp);
    return g;
}

RankNormalForm rank_normal_form(const PrimeField& F, const DenseMatrix& b) {
    const size_t n = b.rows();
    assert(b.cols() == n);
    DenseMatrix d = b;
    DenseMatrix x = identity(n);
    DenseMatrix y = identity(n);
    size_t r = 0;
    for (; r < n; ++r) {
        // Find any nonzero entry in the trailing submatrix.
        size_t pi = n, pj = n;
        for (size_t i = r; i < n && pi == n; ++i)
            for (size_t j = r; j < n; ++j)
                if (d.at(i, j).v != 0) {
                    pi = i;
                    pj = j;
                    break;
                }
        if (pi == n) break;
        if (pi != r) {
            for (size_t t = 0; t < n; ++t) {
                std::swap(d.at(pi, t), d.at(r, t));
                std::swap(x.at(pi, t), x.at(r, t));
            }
        }
        if (pj != r) {
            for (size_t t = 0; t < n; ++t) {
                std::swap(d.at(t, pj), d.at(t, r));
                std::swap(y.at(t, pj), y.at(t, r));
            }
        }
        Fp pinv = F.inv(d.at(r, r));
        for (size_t t = 0; t < n; ++t) {
            d.at(r, t) = F.mul(d.at(r, t), pinv);
            x.at(r, t) = F.mul(x.at(r, t), pinv);
        }
        for (size_t i = 0; i < n; ++i) {
            if (i == r || d.at(i, r).v == 0) continue;
            Fp f = d.at(i, r);
            for (size_t t = 0; t < n; ++t) {
                d.at(i, t) = F.sub(d.at(i, t), F.mul(f, d.at(r, t)));
                x.at(i, t) = F.sub(x.at(i, t), F.mul(f, x.at(r, t)));
            }
        }
        for (size_t j = 0; j < n; ++j) {
            if (j == r || d.at(r, j).v == 0) continue;
            Fp f = d.at(r, j);
            for (size_t t = 0; t < n; ++t) {
                d.at(t, j) = F.sub(d.at(t, j), F.mul(f, d.at(t, r)));
                y.at(t, j) = F.sub(y.at(t, j), F.mul(f, y.at(t, r)));
            }
        }
    }
    return RankNormalForm{std::move(x), std::move(y), r};
}

DenseMatrix inverse(const PrimeField& F, const DenseMatrix& a) {
    const size_t n = a.rows();
    if (a.cols() != n) throw std::invalid_argument("inverse: matrix must be square");
    DenseMatrix m = a;
    DenseMatrix inv = identity(n);
    for (size_t j = 0; j < n; ++j) {
        size_t pivot = n;
        for (size_t i = j; i < n; ++i)
            if (m.at(i, j).v != 0) {
                pivot = i;
                break;
            }
        if (pivot == n) throw singular_matrix_error("inverse: matrix is singular");
        if (pivot != j) {
            for (size_t t = 0; t < n; ++t) {
                std::swap(m.at(pivot, t), m.at(j, t));
                std::swap(inv.at(pivot, t), inv.at(j, t));
            }
        }
        Fp pinv = F.inv(m.at(j, j));
        for (size_t t = 0; t < n; ++t) {
            m.at(j, t) = F.mul(m.at(j, t), pinv);
            inv.at(j, t) = F.mul(inv.at(j, t), pinv);
        }
        for (size_t i = 0; i < n; ++i) {
            if (i == j || m.at(i, j).v == 0) continue;
            Fp f = m.at(i, j);
            for (size_t t = 0; t < n; ++t) {
                m.at(i, t) = F.sub(m.at(i, t), F.mul(f, m.at(j, t)));
                inv.at(i, t) = F.sub(inv.at(i, t), F.mul(f, inv.at(j, t)));
            }
        }
    }
    return inv;
}

WoodburyFactors woodbury_update_factored(const PrimeField& F, const DenseMatrix& minv,
                                         const DenseMatrix& u, const DenseMatrix& v) {
    const size_t n = minv.rows();
    const size_t c = u.cols();
    assert(minv.cols() == n && u.rows() == n && v.rows() == n && v.cols() == c);
    DenseMatrix mu = multiply(F, minv, u); // n x c
    // capacitance K = I + V^T Minv U
    DenseMatrix k(c, c);
    for (size_t i = 0; i < c; ++i) {
        for (size_t j = 0; j < c; ++j) {
            Fp s = (i == j) ? F.one() : F.zero();
            for (size_t t = 0; t < n; ++t) s = F.add(s, F.mul(v.at(t, i), mu.at(t, j)));
            k.at(i, j) = s;
        }
    }
    DenseMatrix kinv;
    try {
        kinv = inverse(F, k);
    } catch (const singular_matrix_error&) {
        throw singular_matrix_error("woodbury_update: singular capacitance (update makes M singular)");
    }
    // W = -Minv U K^{-1};  Z^T = V^T Minv, stored as Z = Minv^T V.
    DenseMatrix w = multiply(F, mu, kinv);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < c; ++j) w.at(i, j) = F.neg(w.at(i, j));
    DenseMatrix z = multiply(F, transpose(minv), v); // n x c
    WoodburyFactors out;
    out.W = std::move(w);
    out.Z = std::move(z);
    // new inverse = Minv + W Z^T
    DenseMatrix upd = multiply(F, out.W, transpose(out.Z));
    out.new_inverse = add(F, minv, upd);
    return out;
}

DenseMatrix woodbury_update(const PrimeField& F, const DenseMatrix& minv,
                            const DenseMatrix& u, const DenseMatrix& v) {
    return woodbury_update_factored(F, minv, u, v).new_inverse;
}

Normalized normalize(const PrimeField& F, const SparseMatrix& a) {
    // Logical entry sums decide liveness; duplicate triplets may cancel.
    std::unordered_map<uint64_t, Fp> sums;
    sums.reserve(a.entries.size() * 2);
    for (const Triplet& e : a.entries) {
        uint64_t key = (uint64_t)e.row * a.cols + e.col;
        auto [it, fresh] = sums.emplace(key, e.value);
        if (!fresh) it->second = F.add(it->second, e.value);
    }
    std::vector<char> row_live(a.rows, 0), col_live(a.cols, 0);
    for (const auto& [key, v] : sums) {
        if (v.v == 0) continue;
        row_live[key / a.cols] = 1;
        col_live[key % a.cols] = 1;
    }
    Normalized out;
    std::vector<uint32_t> row_new(a.rows, UINT32_MAX), col_new(a.cols, UINT32_MAX);
    for (size_t i = 0; i < a.rows; ++i)
        if (row_live[i]) {
            row_new[i] = (uint32_t)out.row_map.size();
            out.row_map.push_back(i);
        }
    for (size_t j = 0; j < a.cols; ++j)
        if (col_live[j]) {
            col_new[j] = (uint32_t)out.col_map.size();
            out.col_map.push_back(j);
        }
    out.matrix = SparseMatrix(out.row_map.size(), out.col_map.size());
    for (const Triplet& e : a.entries) {
        if (row_new[e.row] == UINT32_MAX || col_new[e.col] == UINT32_MAX) continue;
        out.matrix.entries.push_back(Triplet{row_new[e.row], col_new[e.col], e.value});
    }
    return out;
}

} // namespace fprank
