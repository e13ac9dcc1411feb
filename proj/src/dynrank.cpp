#include "fprank/dynrank.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>

#include "fprank/errors.hpp"
#include "fprank/polyeval.hpp"

namespace fprank {

namespace {

bool all_zero(const std::vector<Fp>& v) {
    for (Fp x : v)
        if (x.v != 0) return false;
    return true;
}

// dst_row += c * src_row
void row_axpy(std::vector<std::vector<Fp>>& m, const PrimeField& F, size_t dst, size_t src,
              Fp c) {
    auto& d = m[dst];
    const auto& s = m[src];
    for (size_t j = 0; j < d.size(); ++j) d[j] = F.add(d[j], F.mul(c, s[j]));
}

// col dst += c * col src
void col_axpy(std::vector<std::vector<Fp>>& m, const PrimeField& F, size_t dst, size_t src,
              Fp c) {
    for (auto& row : m) row[dst] = F.add(row[dst], F.mul(c, row[src]));
}

void row_scale(std::vector<std::vector<Fp>>& m, const PrimeField& F, size_t i, Fp c) {
    for (auto& x : m[i]) x = F.mul(c, x);
}

DenseMatrix grid_to_dense(const std::vector<std::vector<Fp>>& g, size_t rows, size_t cols) {
    DenseMatrix d(rows, cols);
    for (size_t i = 0; i < rows; ++i)
        for (size_t j = 0; j < cols; ++j) d.at(i, j) = g[i][j];
    return d;
}

std::vector<std::vector<Fp>> dense_to_grid(const DenseMatrix& d) {
    std::vector<std::vector<Fp>> g(d.rows(), std::vector<Fp>(d.cols()));
    for (size_t i = 0; i < d.rows(); ++i)
        for (size_t j = 0; j < d.cols(); ++j) g[i][j] = d.at(i, j);
    return g;
}

} // namespace

DynRankState::DynRankState(const PrimeField& F, const DenseMatrix& a, SplitRng rng,
                           DynRankOptions opts)
    : F_(F), rng_(std::move(rng)) {
    if (a.rows() == 0 || a.cols() == 0)
        throw std::invalid_argument("dynrank: the matrix must have at least one row and column");

    transposed_ = a.rows() > a.cols();
    DenseMatrix ae = transposed_ ? transpose(a) : a;
    me_ = ae.rows();
    ne_ = ae.cols();
    ae_ = dense_to_grid(ae);

    uint64_t wanted = opts.order_ceiling
                          ? opts.order_ceiling
                          : 4 * (uint64_t)(a.rows() + a.cols() + opts.reserved_updates);
    order_ceiling_ = std::min<uint64_t>(wanted, F_.prime() - 2);
    if (order_ceiling_ < ne_)
        throw std::invalid_argument("dynrank: field too small for this many columns");

    rebuild_sketch();
}

// Uniform nonzero g whose powers g^1..g^ceiling all differ from 1 (hence all
// evaluation points with exponents up to the ceiling are pairwise distinct).
// A primitive root always qualifies since the ceiling is capped at p - 2, so
// the rejection loop terminates quickly.
Fp DynRankState::choose_generator() const {
    for (int attempt = 0; attempt < 256; ++attempt) {
        Fp g = F_.sample_nonzero(rng_);
        Fp cur = F_.one();
        bool ok = true;
        for (uint64_t e = 1; e <= order_ceiling_; ++e) {
            cur = F_.mul(cur, g);
            if (cur == F_.one()) {
                ok = false;
                break;
            }
        }
        if (ok) return g;
    }
    throw std::runtime_error("dynrank: could not find a generator of large order");
}

// Rebuild every derived structure from ae_ alone: fresh exponents 1..ne,
// fresh generator, B = Ae*V row-by-row as multipoint evaluation, and the
// normal form of B from scratch.
void DynRankState::rebuild_sketch() {
    g_ = choose_generator();

    exps_.resize(ne_);
    points_.resize(ne_);
    Fp cur = F_.one();
    for (size_t l = 0; l < ne_; ++l) {
        exps_[l] = l + 1;
        cur = F_.mul(cur, g_);
        points_[l] = cur;
    }
    free_exps_ = {};
    next_exp_ = ne_ + 1;

    v_.assign(ne_, std::vector<Fp>(me_));
    for (size_t l = 0; l < ne_; ++l) {
        Fp p = points_[l];
        Fp acc = p;
        for (size_t j = 0; j < me_; ++j) {
            v_[l][j] = acc;
            acc = F_.mul(acc, p);
        }
    }

    // Row i of B holds f_i(g^1), ..., f_i(g^me) for f_i(t) = sum_l Ae[i][l] t^(l+1).
    std::vector<Fp> eval_points(points_.begin(), points_.begin() + me_);
    b_.assign(me_, std::vector<Fp>(me_));
    Polynomial f(ne_ + 1);
    for (size_t i = 0; i < me_; ++i) {
        f[0] = F_.zero();
        for (size_t l = 0; l < ne_; ++l) f[l + 1] = ae_[i][l];
        b_[i] = multipoint_eval(F_, f, eval_points);
    }

    RankNormalForm nf = rank_normal_form(F_, grid_to_dense(b_, me_, me_));
    x_ = dense_to_grid(nf.X);
    y_ = dense_to_grid(nf.Y);
    r_ = nf.rank;
}

uint64_t DynRankState::alloc_exponent() {
    if (!free_exps_.empty()) {
        uint64_t e = free_exps_.top();
        free_exps_.pop();
        return e;
    }
    if (next_exp_ > order_ceiling_) extend_order(2 * order_ceiling_);
    return next_exp_++;
}

void DynRankState::extend_order(uint64_t target) {
    target = std::min<uint64_t>(target, F_.prime() - 2);
    if (target <= order_ceiling_)
        throw std::runtime_error("dynrank: out of distinct evaluation points in this field");
    Fp cur = F_.pow(g_, order_ceiling_);
    bool ok = true;
    for (uint64_t e = order_ceiling_ + 1; e <= target; ++e) {
        cur = F_.mul(cur, g_);
        if (cur == F_.one()) {
            ok = false;
            break;
        }
    }
    order_ceiling_ = target;
    // The incumbent generator's order ends inside the new range: start over
    // with one validated for the full ceiling.  (With a word-sized field this
    // is a never-taken safety path.)
    if (!ok) rebuild_sketch();
}

// ---------------------------------------------------------------------------
// Normal-form repair.
//
// Before the change, X*B_old*Y = D = (I_r 0; 0 0).  The caller replaced B by
// B_old + a*b^T, so X*B*Y = D + u*w^T with u = X*a, w^T = b^T*Y.  Restore a
// canonical D' by composing further row operations into X, column operations
// into Y, and a final synchronized permutation, all in O(s^2).
void DynRankState::nf_apply_rank_one(const std::vector<Fp>& a, const std::vector<Fp>& b) {
    const size_t s = me_;
    std::vector<Fp> u(s, F_.zero()), w(s, F_.zero());
    for (size_t q = 0; q < s; ++q) {
        Fp acc = F_.zero();
        for (size_t t = 0; t < s; ++t) acc = F_.add(acc, F_.mul(x_[q][t], a[t]));
        u[q] = acc;
    }
    for (size_t t = 0; t < s; ++t) {
        Fp acc = F_.zero();
        for (size_t q = 0; q < s; ++q) acc = F_.add(acc, F_.mul(b[q], y_[q][t]));
        w[t] = acc;
    }
    if (all_zero(u) || all_zero(w)) return; // D is unchanged

    // Concentrate u on its first nonzero coordinate i: left-multiply by
    // E = I + (e_i - u/u_i) e_i^T (det 1, fixes row i), then
    // E*(D + u*w^T) = E*D + u_i e_i w^T.  Everything that remains non-canonical
    // lives in row i, column i, and the corner (i,i):
    //   row i:    rho_t  = u_i * w_t            (t != i)
    //   column i: gamma_q = -u_q / u_i if i < r (q != i; zero when i >= r)
    //   corner:   (i < r ? 1 : 0) + u_i * w_i
    size_t i = 0;
    while (u[i].v == 0) ++i;
    Fp ui = u[i];
    Fp ui_inv = F_.inv(ui);

    std::vector<Fp> gamma(s, F_.zero()), rho(s, F_.zero());
    for (size_t q = 0; q < s; ++q) {
        if (q == i || u[q].v == 0) continue;
        Fp wq = F_.neg(F_.mul(u[q], ui_inv));
        row_axpy(x_, F_, q, i, wq);
        if (i < r_) gamma[q] = wq;
    }
    for (size_t t = 0; t < s; ++t)
        if (t != i) rho[t] = F_.mul(ui, w[t]);
    Fp corner = F_.add(i < r_ ? F_.one() : F_.zero(), F_.mul(ui, w[i]));

    // Phase 1: clear row/column i against the surviving diagonal ones.  The
    // row operation must come first: row q still carries gamma[q] in column
    // i, which folds into the corner.
    for (size_t q = 0; q < r_; ++q) {
        if (q == i) continue;
        if (rho[q].v != 0) {
            corner = F_.sub(corner, F_.mul(rho[q], gamma[q]));
            row_axpy(x_, F_, i, q, F_.neg(rho[q]));
            rho[q] = F_.zero();
        }
        if (gamma[q].v != 0) {
            col_axpy(y_, F_, i, q, F_.neg(gamma[q]));
            gamma[q] = F_.zero();
        }
    }

    // Tail = indices >= r other than i; only there (and at the corner) can
    // new pivots appear.  gamma/rho keep their original tail values below:
    // the elimination needs them as coefficients even after the matrix
    // entries they describe are zeroed.
    auto first_tail = [&](const std::vector<Fp>& vec) -> size_t {
        for (size_t q = r_; q < s; ++q)
            if (q != i && vec[q].v != 0) return q;
        return s;
    };
    size_t q0 = first_tail(gamma);
    size_t t0 = first_tail(rho);

    std::vector<std::pair<size_t, size_t>> pivots;
    for (size_t q = 0; q < r_; ++q)
        if (q != i) pivots.emplace_back(q, q);

    if (corner.v != 0) {
        Fp cinv = F_.inv(corner);
        for (size_t q = r_; q < s; ++q)
            if (q != i && gamma[q].v != 0) row_axpy(x_, F_, q, i, F_.neg(F_.mul(gamma[q], cinv)));
        for (size_t t = r_; t < s; ++t)
            if (t != i && rho[t].v != 0) col_axpy(y_, F_, t, i, F_.neg(F_.mul(rho[t], cinv)));
        row_scale(x_, F_, i, cinv);
        pivots.emplace_back(i, i);

        // Clearing the tail column against row i deposited the rank-one
        // block -gamma*rho^T/corner across (tail x tail); sweep it onto the
        // single position (q0, t0) and normalize that pivot.
        if (q0 < s && t0 < s) {
            Fp gq0_inv = F_.inv(gamma[q0]);
            for (size_t q = q0 + 1; q < s; ++q)
                if (q != i && gamma[q].v != 0)
                    row_axpy(x_, F_, q, q0, F_.neg(F_.mul(gamma[q], gq0_inv)));
            Fp rt0_inv = F_.inv(rho[t0]);
            for (size_t t = t0 + 1; t < s; ++t)
                if (t != i && rho[t].v != 0)
                    col_axpy(y_, F_, t, t0, F_.neg(F_.mul(rho[t], rt0_inv)));
            row_scale(x_, F_, q0, F_.inv(F_.neg(F_.mul(F_.mul(gamma[q0], rho[t0]), cinv))));
            pivots.emplace_back(q0, t0);
        }
    } else {
        // No corner pivot.  Row i and column i each contribute a pivot of
        // their own if they are nonzero on the tail.
        if (t0 < s) {
            Fp rt0_inv = F_.inv(rho[t0]);
            for (size_t t = t0 + 1; t < s; ++t)
                if (t != i && rho[t].v != 0)
                    col_axpy(y_, F_, t, t0, F_.neg(F_.mul(rho[t], rt0_inv)));
            row_scale(x_, F_, i, rt0_inv);
            pivots.emplace_back(i, t0);
        }
        if (q0 < s) {
            Fp gq0_inv = F_.inv(gamma[q0]);
            for (size_t q = q0 + 1; q < s; ++q)
                if (q != i && gamma[q].v != 0)
                    row_axpy(x_, F_, q, q0, F_.neg(F_.mul(gamma[q], gq0_inv)));
            row_scale(x_, F_, q0, gq0_inv);
            pivots.emplace_back(q0, i);
        }
    }

    // Synchronized permutation: send pivot rows/columns to the leading
    // diagonal (sorted by row for determinism), everything else after them
    // in ascending order.
    std::sort(pivots.begin(), pivots.end());
    std::vector<size_t> row_dest(s, SIZE_MAX), col_dest(s, SIZE_MAX);
    size_t slot = 0;
    for (const auto& [pr, pc] : pivots) {
        row_dest[pr] = slot;
        col_dest[pc] = slot;
        ++slot;
    }
    r_ = slot;
    for (size_t q = 0; q < s; ++q)
        if (row_dest[q] == SIZE_MAX) row_dest[q] = slot++;
    slot = r_;
    for (size_t t = 0; t < s; ++t)
        if (col_dest[t] == SIZE_MAX) col_dest[t] = slot++;

    Grid xn(s);
    for (size_t q = 0; q < s; ++q) xn[row_dest[q]] = std::move(x_[q]);
    x_ = std::move(xn);
    for (auto& row : y_) {
        std::vector<Fp> nrow(s);
        for (size_t t = 0; t < s; ++t) nrow[col_dest[t]] = row[t];
        row = std::move(nrow);
    }
}

void DynRankState::internal_rank_one(const std::vector<Fp>& u, const std::vector<Fp>& v) {
    assert(u.size() == me_ && v.size() == ne_);
    if (all_zero(u) || all_zero(v)) return;

    std::vector<Fp> w(me_, F_.zero());
    for (size_t l = 0; l < ne_; ++l) {
        if (v[l].v == 0) continue;
        for (size_t j = 0; j < me_; ++j) w[j] = F_.add(w[j], F_.mul(v[l], v_[l][j]));
    }
    for (size_t i = 0; i < me_; ++i) {
        if (u[i].v == 0) continue;
        for (size_t l = 0; l < ne_; ++l)
            if (v[l].v != 0) ae_[i][l] = F_.add(ae_[i][l], F_.mul(u[i], v[l]));
    }
    if (all_zero(w)) return; // A moved inside the sketch's blind spot: B = Ae*V still holds

    for (size_t i = 0; i < me_; ++i) {
        if (u[i].v == 0) continue;
        for (size_t j = 0; j < me_; ++j) b_[i][j] = F_.add(b_[i][j], F_.mul(u[i], w[j]));
    }
    nf_apply_rank_one(u, w);
}

void DynRankState::internal_add_col(const std::vector<Fp>& vals) {
    assert(vals.size() == me_);
    uint64_t e = alloc_exponent();
    Fp point = F_.pow(g_, e);
    exps_.push_back(e);
    points_.push_back(point);

    std::vector<Fp> vrow(me_);
    Fp acc = point;
    for (size_t j = 0; j < me_; ++j) {
        vrow[j] = acc;
        acc = F_.mul(acc, point);
    }
    v_.push_back(std::move(vrow));

    for (auto& row : ae_) row.push_back(F_.zero());
    ne_ += 1;

    // B and the normal form are untouched by a zero column; filling it in is
    // a plain rank-one update against the new unit vector.
    std::vector<Fp> unit(ne_, F_.zero());
    unit[ne_ - 1] = F_.one();
    internal_rank_one(vals, unit);
}

void DynRankState::internal_add_row(const std::vector<Fp>& vals) {
    assert(vals.size() == ne_);
    assert(me_ < ne_);

    // Grow the sketch square by one: V gains the column of (me+1)-th powers,
    // so B gains column c = Ae * v_new and a zero row.  Border X and Y with a
    // unit row/column, append the zero row/col to B, then repair the single
    // off-form column as a rank-one change.
    std::vector<Fp> vnew(ne_);
    for (size_t l = 0; l < ne_; ++l) vnew[l] = F_.mul(v_[l][me_ - 1], points_[l]);
    std::vector<Fp> c(me_ + 1, F_.zero());
    for (size_t i = 0; i < me_; ++i) {
        Fp acc = F_.zero();
        for (size_t l = 0; l < ne_; ++l) acc = F_.add(acc, F_.mul(ae_[i][l], vnew[l]));
        c[i] = acc;
    }

    for (size_t l = 0; l < ne_; ++l) v_[l].push_back(vnew[l]);
    for (auto& row : b_) row.push_back(F_.zero());
    b_.emplace_back(me_ + 1, F_.zero());
    for (auto& row : x_) row.push_back(F_.zero());
    x_.emplace_back(me_ + 1, F_.zero());
    x_.back().back() = F_.one();
    for (auto& row : y_) row.push_back(F_.zero());
    y_.emplace_back(me_ + 1, F_.zero());
    y_.back().back() = F_.one();
    ae_.emplace_back(ne_, F_.zero());
    me_ += 1;

    if (!all_zero(c)) {
        std::vector<Fp> unit(me_, F_.zero());
        unit[me_ - 1] = F_.one();
        for (size_t q = 0; q < me_; ++q)
            b_[q][me_ - 1] = F_.add(b_[q][me_ - 1], c[q]);
        nf_apply_rank_one(c, unit);
    }

    // Fill in the row contents.
    std::vector<Fp> unit_row(me_, F_.zero());
    unit_row[me_ - 1] = F_.one();
    internal_rank_one(unit_row, vals);
}

void DynRankState::internal_delete_col(size_t j) {
    assert(j < ne_);
    assert(ne_ > me_);

    // Zero the column first so dropping it leaves B = Ae * V intact.
    std::vector<Fp> negcol(me_);
    for (size_t i = 0; i < me_; ++i) negcol[i] = F_.neg(ae_[i][j]);
    std::vector<Fp> unit(ne_, F_.zero());
    unit[j] = F_.one();
    internal_rank_one(negcol, unit);

    for (auto& row : ae_) row.erase(row.begin() + (ptrdiff_t)j);
    v_.erase(v_.begin() + (ptrdiff_t)j);
    points_.erase(points_.begin() + (ptrdiff_t)j);
    free_exps_.push(exps_[j]);
    exps_.erase(exps_.begin() + (ptrdiff_t)j);
    ne_ -= 1;
}

void DynRankState::internal_delete_row(size_t i) {
    assert(i < me_);
    assert(me_ >= 2);

    // Zero the row.
    std::vector<Fp> negrow(ne_);
    for (size_t l = 0; l < ne_; ++l) negrow[l] = F_.neg(ae_[i][l]);
    std::vector<Fp> unit(me_, F_.zero());
    unit[i] = F_.one();
    internal_rank_one(unit, negrow);

    // Rotate the zero row into the last position.  B rotates with Ae; X
    // compensates on its columns, leaving X*B*Y bit-for-bit unchanged.
    if (i != me_ - 1) {
        std::rotate(ae_.begin() + (ptrdiff_t)i, ae_.begin() + (ptrdiff_t)i + 1, ae_.end());
        std::rotate(b_.begin() + (ptrdiff_t)i, b_.begin() + (ptrdiff_t)i + 1, b_.end());
        for (auto& row : x_)
            std::rotate(row.begin() + (ptrdiff_t)i, row.begin() + (ptrdiff_t)i + 1, row.end());
    }

    // The sketch loses V's last column, so B must shed its last column too;
    // cancel it with one more normal-form repair.  (B's last row is already
    // zero: it is the deleted row times V.)
    std::vector<Fp> c(me_);
    bool nonzero = false;
    for (size_t q = 0; q < me_; ++q) {
        c[q] = b_[q][me_ - 1];
        nonzero = nonzero || c[q].v != 0;
    }
    if (nonzero) {
        std::vector<Fp> negc(me_);
        for (size_t q = 0; q < me_; ++q) negc[q] = F_.neg(c[q]);
        std::vector<Fp> unit_last(me_, F_.zero());
        unit_last[me_ - 1] = F_.one();
        for (size_t q = 0; q < me_; ++q) b_[q][me_ - 1] = F_.zero();
        nf_apply_rank_one(negc, unit_last);
    }
    assert(r_ <= me_ - 1);

    // Guarantee the leading principal blocks of X and Y stay invertible
    // before truncation.  Losing the last row and column of X can cost its
    // leading block at most one rank; adding X's last row to a dependent
    // leading row restores it, and leaves D alone because D's last row is
    // zero (r <= me-1).  Y is symmetric with its last column.
    size_t lead = me_ - 1;
    {
        DenseMatrix xl(lead, lead);
        for (size_t q = 0; q < lead; ++q)
            for (size_t t = 0; t < lead; ++t) xl.at(q, t) = x_[q][t];
        GaussProfile prof = gauss_rank(F_, xl);
        if (prof.rank < lead) {
            size_t dep = 0;
            while (dep < prof.row_profile.size() && prof.row_profile[dep] == dep) ++dep;
            row_axpy(x_, F_, dep, me_ - 1, F_.one());
        }
    }
    {
        DenseMatrix yl(lead, lead);
        for (size_t q = 0; q < lead; ++q)
            for (size_t t = 0; t < lead; ++t) yl.at(q, t) = y_[q][t];
        GaussProfile prof = gauss_rank(F_, yl);
        if (prof.rank < lead) {
            size_t dep = 0;
            while (dep < prof.col_profile.size() && prof.col_profile[dep] == dep) ++dep;
            col_axpy(y_, F_, dep, me_ - 1, F_.one());
        }
    }

    ae_.pop_back();
    b_.pop_back();
    x_.pop_back();
    y_.pop_back();
    for (size_t q = 0; q + 1 < me_; ++q) {
        b_[q].pop_back();
        x_[q].pop_back();
        y_[q].pop_back();
    }
    for (auto& vrow : v_) vrow.pop_back();
    me_ -= 1;
}

// Switch the stored orientation (only called at square states): replace Ae by
// its transpose while re-expressing the same sketch against the canonical
// Vandermonde points g^1..g^s.  Transposing X*(Ae V)*Y = D gives
//   (V Y)^T * Ae^T * X^T = D,
// so the new X is (V*Y)^T, and the new Y must satisfy Vt * Ynew = X^T for the
// canonical Vandermonde Vt — one polynomial interpolation per column.  The
// rank (and the logical matrix) are unchanged.
void DynRankState::flip_representation() {
    assert(me_ == ne_);
    const size_t s = me_;

    std::vector<Fp> gp(s); // canonical points g^1..g^s
    Fp cur = F_.one();
    for (size_t j = 0; j < s; ++j) {
        cur = F_.mul(cur, g_);
        gp[j] = cur;
    }

    // new X = (V*Y)^T: column j of V*Y evaluates the polynomial with
    // coefficients Y[.][j] (shifted one power up) at every current point.
    Grid xn(s, std::vector<Fp>(s));
    for (size_t j = 0; j < s; ++j) {
        Polynomial f(s + 1);
        f[0] = F_.zero();
        for (size_t t = 0; t < s; ++t) f[t + 1] = y_[t][j];
        for (size_t l = 0; l < s; ++l) xn[j][l] = eval_poly(F_, f, points_[l]);
    }

    // new Y: solve Vt * ycol = (X row j)^T per column.  With Vt[l][t] =
    // gp[l]^(t+1) this is interpolation of the values X[j][l] / gp[l] at the
    // canonical points.
    Grid yn(s, std::vector<Fp>(s));
    std::vector<Fp> ys(s);
    for (size_t j = 0; j < s; ++j) {
        for (size_t l = 0; l < s; ++l) ys[l] = F_.mul(x_[j][l], F_.inv(gp[l]));
        Polynomial sol = interpolate(F_, gp, ys);
        for (size_t t = 0; t < s; ++t) yn[t][j] = sol[t];
    }

    // new B = Ae^T * Vt, one column of Ae (= row of Ae^T) per polynomial.
    Grid bn(s, std::vector<Fp>(s));
    for (size_t i = 0; i < s; ++i) {
        Polynomial f(s + 1);
        f[0] = F_.zero();
        for (size_t l = 0; l < s; ++l) f[l + 1] = ae_[l][i];
        for (size_t j = 0; j < s; ++j) bn[i][j] = eval_poly(F_, f, gp[j]);
    }

    Grid an(s, std::vector<Fp>(s));
    for (size_t i = 0; i < s; ++i)
        for (size_t l = 0; l < s; ++l) an[i][l] = ae_[l][i];
    ae_ = std::move(an);

    Grid vn(s, std::vector<Fp>(s));
    for (size_t l = 0; l < s; ++l) {
        Fp acc = gp[l];
        for (size_t j = 0; j < s; ++j) {
            vn[l][j] = acc;
            acc = F_.mul(acc, gp[l]);
        }
    }
    v_ = std::move(vn);

    x_ = std::move(xn);
    y_ = std::move(yn);
    b_ = std::move(bn);
    for (size_t l = 0; l < s; ++l) exps_[l] = l + 1;
    points_ = gp;
    free_exps_ = {};
    next_exp_ = s + 1;
    transposed_ = !transposed_;
}

void DynRankState::rank_one_update(const std::vector<Fp>& u, const std::vector<Fp>& v) {
    if (u.size() != rows() || v.size() != cols())
        throw std::invalid_argument("rank_one_update: vector sizes must match the dimensions");
    if (transposed_)
        internal_rank_one(v, u);
    else
        internal_rank_one(u, v);
}

void DynRankState::add_row(const std::vector<Fp>& vals) {
    if (vals.size() != cols())
        throw std::invalid_argument("add_row: expected one value per column");
    if (!transposed_ && me_ == ne_) flip_representation();
    if (transposed_)
        internal_add_col(vals);
    else
        internal_add_row(vals);
}

void DynRankState::add_col(const std::vector<Fp>& vals) {
    if (vals.size() != rows())
        throw std::invalid_argument("add_col: expected one value per row");
    if (transposed_ && me_ == ne_) flip_representation();
    if (transposed_)
        internal_add_row(vals);
    else
        internal_add_col(vals);
}

void DynRankState::delete_row(size_t i) {
    if (i >= rows()) throw std::invalid_argument("delete_row: index out of range");
    if (rows() == 1) throw std::invalid_argument("delete_row: cannot drop the last row");
    if (transposed_ && me_ == ne_) flip_representation();
    if (transposed_)
        internal_delete_col(i);
    else
        internal_delete_row(i);
}

void DynRankState::delete_col(size_t j) {
    if (j >= cols()) throw std::invalid_argument("delete_col: index out of range");
    if (cols() == 1) throw std::invalid_argument("delete_col: cannot drop the last column");
    if (!transposed_ && me_ == ne_) flip_representation();
    if (transposed_)
        internal_delete_row(j);
    else
        internal_delete_col(j);
}

DenseMatrix DynRankState::logical_matrix() const {
    DenseMatrix ae = grid_to_dense(ae_, me_, ne_);
    return transposed_ ? transpose(ae) : ae;
}

void DynRankState::check_invariants() const {
    auto fail = [](const char* what) { throw std::logic_error(what); };

    if (me_ > ne_) fail("dynrank invariant: stored matrix must be wide");
    if (ae_.size() != me_ || v_.size() != ne_ || b_.size() != me_ || x_.size() != me_ ||
        y_.size() != me_ || exps_.size() != ne_ || points_.size() != ne_)
        fail("dynrank invariant: structure sizes disagree");

    std::unordered_set<uint64_t> seen;
    for (size_t l = 0; l < ne_; ++l) {
        if (exps_[l] == 0 || exps_[l] > order_ceiling_)
            fail("dynrank invariant: exponent out of range");
        if (!seen.insert(exps_[l]).second) fail("dynrank invariant: duplicate exponent");
        if (!(points_[l] == F_.pow(g_, exps_[l])))
            fail("dynrank invariant: point disagrees with exponent");
        Fp acc = points_[l];
        for (size_t j = 0; j < me_; ++j) {
            if (!(v_[l][j] == acc)) fail("dynrank invariant: V is not the Vandermonde block");
            acc = F_.mul(acc, points_[l]);
        }
    }

    for (size_t i = 0; i < me_; ++i)
        for (size_t j = 0; j < me_; ++j) {
            Fp acc = F_.zero();
            for (size_t l = 0; l < ne_; ++l) acc = F_.add(acc, F_.mul(ae_[i][l], v_[l][j]));
            if (!(acc == b_[i][j])) fail("dynrank invariant: B != Ae * V");
        }

    DenseMatrix xd = grid_to_dense(x_, me_, me_);
    DenseMatrix yd = grid_to_dense(y_, me_, me_);
    DenseMatrix bd = grid_to_dense(b_, me_, me_);
    if (gauss_rank_value(F_, xd) != me_) fail("dynrank invariant: X is singular");
    if (gauss_rank_value(F_, yd) != me_) fail("dynrank invariant: Y is singular");
    if (gauss_rank_value(F_, bd) != r_) fail("dynrank invariant: r != rank(B)");

    DenseMatrix d = multiply(F_, multiply(F_, xd, bd), yd);
    for (size_t i = 0; i < me_; ++i)
        for (size_t j = 0; j < me_; ++j) {
            Fp want = (i == j && i < r_) ? F_.one() : F_.zero();
            if (!(d.at(i, j) == want)) fail("dynrank invariant: X*B*Y is not canonical");
        }
}

std::vector<size_t> run_dynrank_script(const PrimeField& F, const DenseMatrix& start,
                                       std::istream& script, SplitRng rng,
                                       DynRankOptions opts) {
    DynRankState state(F, start, std::move(rng), opts);
    std::vector<size_t> results;

    auto parse_vals = [&F](std::istringstream& in, size_t count, size_t line_no,
                           const char* op) {
        std::vector<Fp> vals;
        vals.reserve(count);
        long long x = 0;
        while (vals.size() < count && in >> x) vals.push_back(F.from_int(x));
        if (vals.size() < count)
            throw io_error("script line " + std::to_string(line_no) + ": " + op + " expected " +
                           std::to_string(count) + " values");
        return vals;
    };
    auto expect_end = [](std::istringstream& in, size_t line_no) {
        std::string extra;
        if (in >> extra)
            throw io_error("script line " + std::to_string(line_no) + ": trailing input '" +
                           extra + "'");
    };

    std::string line;
    size_t line_no = 0;
    while (std::getline(script, line)) {
        ++line_no;
        std::istringstream in(line);
        std::string op;
        if (!(in >> op) || op[0] == '#') continue;

        if (op == "QUERY") {
            expect_end(in, line_no);
            results.push_back(state.rank_query());
        } else if (op == "R1") {
            std::vector<Fp> u = parse_vals(in, state.rows(), line_no, "R1");
            std::string sep;
            if (!(in >> sep) || sep != "|")
                throw io_error("script line " + std::to_string(line_no) +
                               ": R1 expects '|' between the two vectors");
            std::vector<Fp> v = parse_vals(in, state.cols(), line_no, "R1");
            expect_end(in, line_no);
            state.rank_one_update(u, v);
        } else if (op == "ADDROW") {
            std::vector<Fp> vals = parse_vals(in, state.cols(), line_no, "ADDROW");
            expect_end(in, line_no);
            state.add_row(vals);
        } else if (op == "ADDCOL") {
            std::vector<Fp> vals = parse_vals(in, state.rows(), line_no, "ADDCOL");
            expect_end(in, line_no);
            state.add_col(vals);
        } else if (op == "DELROW" || op == "DELCOL") {
            long long idx = -1;
            if (!(in >> idx) || idx < 0)
                throw io_error("script line " + std::to_string(line_no) + ": " + op +
                               " expects a non-negative index");
            expect_end(in, line_no);
            try {
                if (op == "DELROW")
                    state.delete_row((size_t)idx);
                else
                    state.delete_col((size_t)idx);
            } catch (const std::invalid_argument& e) {
                throw io_error("script line " + std::to_string(line_no) + ": " + e.what());
            }
        } else {
            throw io_error("script line " + std::to_string(line_no) + ": unknown operation '" +
                           op + "'");
        }
    }
    return results;
}

} // namespace fprank
