#pragma once

#include <cstdint>
#include <istream>
#include <queue>
#include <vector>

#include "fprank/ff.hpp"
#include "fprank/matrix.hpp"
#include "fprank/rng.hpp"

namespace fprank {

struct DynRankOptions {
    // Highest exponent e for which g^e must stay distinct from 1.  0 derives
    // 4 * (rows + cols + reserved_updates), capped at p - 2.  The cap is the
    // hard limit of the field: once every admissible exponent is in use, row
    // and column insertions throw.
    uint64_t order_ceiling = 0;
    size_t reserved_updates = 1024;
};

// Dynamic rank of a dense matrix A under rank-one updates and row/column
// insertions and deletions, each in O(s * max(m, n)) field operations for
// s = min(m, n), with O(1) rank queries.
//
// The state tracks a square sketch B = Ae * V, where Ae is A or its
// transpose (whichever makes the stored matrix wide), and V is a Vandermonde
// block: row l of V lists powers g^{e_l * 1}, ..., g^{e_l * s} of a fixed
// generator g with per-column exponents e_l kept pairwise distinct.  Since g
// has verified multiplicative order above every exponent in use, the
// evaluation points are distinct, and rank(B) = rank(A) with probability
// 1 - O(s * max(m, n)^2 / p) per update sequence.  B itself is maintained in
// rank normal form X * B * Y = (I_r 0; 0 0) by invertible X, Y, so every
// mutation reduces to a constant number of rank-one normal-form repairs.
class DynRankState {
public:
    DynRankState(const PrimeField& F, const DenseMatrix& a, SplitRng rng,
                 DynRankOptions opts = {});

    size_t rows() const { return transposed_ ? ne_ : me_; }
    size_t cols() const { return transposed_ ? me_ : ne_; }
    size_t rank_query() const { return r_; }

    // A += u * v^T; u sized rows(), v sized cols().
    void rank_one_update(const std::vector<Fp>& u, const std::vector<Fp>& v);

    // Append a row (sized cols()) or column (sized rows()).
    void add_row(const std::vector<Fp>& vals);
    void add_col(const std::vector<Fp>& vals);

    // Delete by index.  The matrix must keep at least one row and column.
    void delete_row(size_t i);
    void delete_col(size_t j);

    // The current logical matrix (for tests and debugging; O(m*n)).
    DenseMatrix logical_matrix() const;

    // Test hook: recompute every maintained identity from scratch and throw
    // std::logic_error on the first violation.
    void check_invariants() const;

private:
    using Grid = std::vector<std::vector<Fp>>;

    void rebuild_sketch();
    Fp choose_generator() const;
    uint64_t alloc_exponent();
    void extend_order(uint64_t target);

    void internal_rank_one(const std::vector<Fp>& u, const std::vector<Fp>& v);
    void internal_add_row(const std::vector<Fp>& vals);
    void internal_add_col(const std::vector<Fp>& vals);
    void internal_delete_row(size_t i);
    void internal_delete_col(size_t j);
    void flip_representation();

    // X*B*Y is canonical and B has just been changed by a*b^T: repair X, Y, r.
    void nf_apply_rank_one(const std::vector<Fp>& a, const std::vector<Fp>& b);

    PrimeField F_;
    mutable SplitRng rng_;
    bool transposed_ = false; // logical A = transposed_ ? Ae^T : Ae
    size_t me_ = 0, ne_ = 0;  // Ae is me x ne with me <= ne
    Grid ae_;                 // me x ne
    Grid v_;                  // ne x me; v_[l][j] = points_[l]^(j+1)
    Grid b_;                  // me x me; B = Ae * V
    Grid x_, y_;              // me x me, invertible, X*B*Y = (I_r 0; 0 0)
    size_t r_ = 0;

    Fp g_;
    uint64_t order_ceiling_ = 0;
    std::vector<uint64_t> exps_; // per Ae column; distinct, in [1, order_ceiling_]
    std::vector<Fp> points_;     // points_[l] = g^exps_[l]
    std::priority_queue<uint64_t, std::vector<uint64_t>, std::greater<uint64_t>> free_exps_;
    uint64_t next_exp_ = 1;
};

// Applies a mutation script to a starting matrix and returns the value of
// every QUERY line in order.  One operation per line:
//   R1 <m values> | <n values>     rank-one update u * v^T
//   ADDROW <n values>              append a row
//   ADDCOL <m values>              append a column
//   DELROW <i>  /  DELCOL <j>      delete by 0-based index
//   QUERY                          record the current rank
// Blank lines and lines starting with '#' are skipped.  Values are integers
// reduced into the field.  Malformed lines raise io_error.
std::vector<size_t> run_dynrank_script(const PrimeField& F, const DenseMatrix& start,
                                       std::istream& script, SplitRng rng,
                                       DynRankOptions opts = {});

} // namespace fprank
