#pragma once

#include <cassert>
#include <cstdint>
#include <vector>

#include "fprank/errors.hpp"
#include "fprank/ff.hpp"

namespace fprank {

// Sorted list of distinct 0-based indices.
using IndexSet = std::vector<size_t>;

struct Triplet {
    uint32_t row = 0;
    uint32_t col = 0;
    Fp value;
};

// Coordinate-format sparse matrix.  Duplicate (row, col) triplets are allowed
// and represent the sum of their values; nnz() counts triplets, not distinct
// logical entries.  The compression operators rely on this: they emit exactly
// two triplets per input triplet without consolidating collisions.
struct SparseMatrix {
    size_t rows = 0;
    size_t cols = 0;
    std::vector<Triplet> entries;

    SparseMatrix() = default;
    SparseMatrix(size_t m, size_t n) : rows(m), cols(n) {}

    size_t nnz() const { return entries.size(); }

    void add(size_t i, size_t j, Fp v) {
        assert(i < rows && j < cols);
        entries.push_back(Triplet{(uint32_t)i, (uint32_t)j, v});
    }
};

class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }

    Fp& at(size_t i, size_t j) {
        assert(i < rows_ && j < cols_);
        return data_[i * cols_ + j];
    }
    Fp at(size_t i, size_t j) const {
        assert(i < rows_ && j < cols_);
        return data_[i * cols_ + j];
    }

    Fp* row_ptr(size_t i) { return data_.data() + i * cols_; }
    const Fp* row_ptr(size_t i) const { return data_.data() + i * cols_; }

    friend bool operator==(const DenseMatrix& a, const DenseMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    size_t rows_ = 0;
    size_t cols_ = 0;
    std::vector<Fp> data_;
};

SparseMatrix transpose(const SparseMatrix& a);
DenseMatrix transpose(const DenseMatrix& a);

DenseMatrix to_dense(const PrimeField& F, const SparseMatrix& a);
SparseMatrix to_sparse(const DenseMatrix& a);

DenseMatrix identity(size_t n);
DenseMatrix multiply(const PrimeField& F, const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix add(const PrimeField& F, const DenseMatrix& a, const DenseMatrix& b);

DenseMatrix submatrix(const DenseMatrix& a, const IndexSet& rows, const IndexSet& cols);
SparseMatrix restrict_rows(const SparseMatrix& a, const IndexSet& rows);
SparseMatrix restrict_cols(const SparseMatrix& a, const IndexSet& cols);

// Rank together with the lexicographically-first independent column and row
// sets.  Restricting the matrix to (row_profile, col_profile) yields an
// invertible rank x rank submatrix: the profile rows span the row space, so a
// column set is independent in the restriction iff it is independent in the
// full matrix.
struct GaussProfile {
    size_t rank = 0;
    IndexSet col_profile;
    IndexSet row_profile;
};

GaussProfile gauss_rank(const PrimeField& F, const DenseMatrix& a);
size_t gauss_rank_value(const PrimeField& F, const DenseMatrix& a);

// Invertible X, Y with X * B * Y = (I_r 0; 0 0).
struct RankNormalForm {
    DenseMatrix X;
    DenseMatrix Y;
    size_t rank = 0;
};

RankNormalForm rank_normal_form(const PrimeField& F, const DenseMatrix& b);

// Gauss-Jordan inverse; throws singular_matrix_error.
DenseMatrix inverse(const PrimeField& F, const DenseMatrix& a);

// (M + U V^T)^{-1} from M^{-1} via the low-rank update identity
//   (M + U V^T)^{-1} = Minv - Minv U (I + V^T Minv U)^{-1} V^T Minv.
// Throws singular_matrix_error when the capacitance I + V^T Minv U is
// singular (the updated matrix is singular exactly in that case).
DenseMatrix woodbury_update(const PrimeField& F, const DenseMatrix& minv,
                            const DenseMatrix& u, const DenseMatrix& v);

// Same update, but also exposes the correction factors: the new inverse is
// Minv + W * Z^T with W, Z of width cols(U).  Consumers that mirror the
// update into submatrix views need the factors, not just the result.
struct WoodburyFactors {
    DenseMatrix new_inverse;
    DenseMatrix W;
    DenseMatrix Z;
};

WoodburyFactors woodbury_update_factored(const PrimeField& F, const DenseMatrix& minv,
                                         const DenseMatrix& u, const DenseMatrix& v);

// Strips logically-zero rows and columns (triplet sums taken per position).
// row_map[i] / col_map[j] give the original index of kept row i / column j.
struct Normalized {
    SparseMatrix matrix;
    std::vector<size_t> row_map;
    std::vector<size_t> col_map;
};

Normalized normalize(const PrimeField& F, const SparseMatrix& a);

} // namespace fprank
