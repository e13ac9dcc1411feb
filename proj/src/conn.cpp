#include "fprank/conn.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "fprank/errors.hpp"

namespace fprank {

namespace {

const int kResampleBudget = 8;

// diag(a, -1): one extra row and column, zero except the new corner.
DenseMatrix border_minus_one(const PrimeField& F, const DenseMatrix& a) {
    size_t m = a.rows();
    DenseMatrix out(m + 1, m + 1);
    for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j < m; ++j) out.at(i, j) = a.at(i, j);
    out.at(m, m) = F.from_int(-1);
    return out;
}

DenseMatrix drop_last_row_col(const DenseMatrix& a) {
    size_t m = a.rows() - 1;
    DenseMatrix out(m, m);
    for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j < m; ++j) out.at(i, j) = a.at(i, j);
    return out;
}

void swap_row_col(DenseMatrix& a, size_t i, size_t j) {
    for (size_t t = 0; t < a.cols(); ++t) std::swap(a.at(i, t), a.at(j, t));
    for (size_t t = 0; t < a.rows(); ++t) std::swap(a.at(t, i), a.at(t, j));
}

} // namespace

void validate_digraph(const DiGraph& g) {
    std::unordered_map<uint64_t, bool> seen;
    for (auto [u, v] : g.edges) {
        if (u >= g.n || v >= g.n)
            throw std::invalid_argument("digraph: edge endpoint out of range");
        if (u == v) throw std::invalid_argument("digraph: self-loop");
        uint64_t key = (uint64_t)u << 32 | v;
        if (seen.count(key)) throw std::invalid_argument("digraph: duplicate edge");
        seen[key] = true;
    }
}

ConnectivityState::ConnectivityState(const PrimeField& F, const DiGraph& g, SplitRng rng)
    : F_(F), rng_(std::move(rng)), n_(g.n), edges_(g.edges) {
    validate_digraph(g);
    for (size_t i = 0; i < edges_.size(); ++i) edge_at_[ekey(edges_[i][0], edges_[i][1])] = i;
    rebuild_all();
}

std::vector<size_t> ConnectivityState::edges_with_tail(size_t s) const {
    std::vector<size_t> out;
    for (size_t i = 0; i < edges_.size(); ++i)
        if (edges_[i][0] == s) out.push_back(i);
    return out;
}

std::vector<size_t> ConnectivityState::edges_with_head(size_t t) const {
    std::vector<size_t> out;
    for (size_t i = 0; i < edges_.size(); ++i)
        if (edges_[i][1] == t) out.push_back(i);
    return out;
}

DenseMatrix ConnectivityState::inverse_submatrix(const std::vector<size_t>& rows,
                                                 const std::vector<size_t>& cols) const {
    DenseMatrix sub(rows.size(), cols.size());
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < cols.size(); ++j) sub.at(i, j) = minv_.at(rows[i], cols[j]);
    return sub;
}

void ConnectivityState::rebuild_all() {
    size_t m = edges_.size();
    for (int attempt = 0;; ++attempt) {
        if (attempt == kResampleBudget)
            throw std::runtime_error("connectivity matrix persistently singular");
        m_ = DenseMatrix(m, m);
        for (size_t i = 0; i < m; ++i) {
            m_.at(i, i) = F_.from_int(-1);
            for (size_t j = 0; j < m; ++j)
                if (i != j && edges_[i][1] == edges_[j][0]) m_.at(i, j) = F_.sample_nonzero(rng_);
        }
        if (m == 0) {
            minv_ = DenseMatrix(0, 0);
            break;
        }
        try {
            minv_ = inverse(F_, m_);
            break;
        } catch (const singular_matrix_error&) {
            continue;
        }
    }

    // Re-materialize every live pair state against the fresh inverse.
    std::map<std::pair<size_t, size_t>, PairState> fresh;
    for (const auto& [key, old] : states_) {
        (void)old;
        std::vector<size_t> rows = edges_with_tail(key.first);
        std::vector<size_t> cols = edges_with_head(key.second);
        if (rows.empty() || cols.empty()) continue;
        DynRankState st(F_, inverse_submatrix(rows, cols),
                        rng_.fork("pair" + std::to_string(material_count_++)));
        fresh.emplace(key, PairState{std::move(rows), std::move(cols), std::move(st)});
    }
    states_ = std::move(fresh);
}

size_t ConnectivityState::edge_connectivity(size_t s, size_t t) const {
    if (s >= n_ || t >= n_)
        throw std::invalid_argument("edge_connectivity: vertex out of range");
    if (s == t) throw std::invalid_argument("edge_connectivity: endpoints must differ");
    auto it = states_.find({s, t});
    if (it == states_.end()) {
        std::vector<size_t> rows = edges_with_tail(s);
        std::vector<size_t> cols = edges_with_head(t);
        if (rows.empty() || cols.empty()) return 0;
        DynRankState st(F_, inverse_submatrix(rows, cols),
                        rng_.fork("pair" + std::to_string(material_count_++)));
        it = states_
                 .emplace(std::make_pair(s, t),
                          PairState{std::move(rows), std::move(cols), std::move(st)})
                 .first;
    }
    return it->second.st.rank_query();
}

void ConnectivityState::add_edge(size_t u, size_t v) {
    if (u >= n_ || v >= n_) throw std::invalid_argument("add_edge: vertex out of range");
    if (u == v) throw std::invalid_argument("add_edge: self-loop");
    if (edge_at_.count(ekey(u, v))) throw std::invalid_argument("add_edge: edge already present");
    size_t m = edges_.size();

    // The bordered matrix diag(M, -1) differs from the target stencil only
    // in the last row and column, a rank-2 correction e*r^T + c*e^T with the
    // corner entries of r and c zero (the border already carries the -1).
    for (int attempt = 0; attempt < kResampleBudget; ++attempt) {
        DenseMatrix uu(m + 1, 2), vv(m + 1, 2);
        uu.at(m, 0) = F_.one();
        vv.at(m, 1) = F_.one();
        for (size_t i = 0; i < m; ++i)
            if (edges_[i][1] == u) uu.at(i, 1) = F_.sample_nonzero(rng_); // new column c
        for (size_t j = 0; j < m; ++j)
            if (edges_[j][0] == v) vv.at(j, 0) = F_.sample_nonzero(rng_); // new row r
        WoodburyFactors wf;
        try {
            wf = woodbury_update_factored(F_, border_minus_one(F_, minv_), uu, vv);
        } catch (const singular_matrix_error&) {
            continue; // resample the fresh entries
        }

        DenseMatrix grown = border_minus_one(F_, m_);
        for (size_t i = 0; i < m; ++i) {
            grown.at(i, m) = uu.at(i, 1);
            grown.at(m, i) = vv.at(i, 0);
        }
        m_ = std::move(grown);
        minv_ = std::move(wf.new_inverse);
        edges_.push_back({(uint32_t)u, (uint32_t)v});
        edge_at_[ekey(u, v)] = m;

        for (auto& [key, ps] : states_) {
            // Border step: the new inverse row/column are zero except for
            // the -1 where they cross.
            if (key.first == u) {
                ps.st.add_row(std::vector<Fp>(ps.col_edges.size()));
                ps.row_edges.push_back(m);
            }
            if (key.second == v) {
                std::vector<Fp> vals(ps.row_edges.size());
                if (!ps.row_edges.empty() && ps.row_edges.back() == m)
                    vals.back() = F_.from_int(-1);
                ps.st.add_col(vals);
                ps.col_edges.push_back(m);
            }
            // Rank-2 correction, one factor column at a time.
            for (size_t f = 0; f < 2; ++f) {
                std::vector<Fp> a(ps.row_edges.size()), b(ps.col_edges.size());
                for (size_t q = 0; q < a.size(); ++q) a[q] = wf.W.at(ps.row_edges[q], f);
                for (size_t q = 0; q < b.size(); ++q) b[q] = wf.Z.at(ps.col_edges[q], f);
                ps.st.rank_one_update(a, b);
            }
        }
        return;
    }

    // Persistent singularity: fall back to a full resample (never expected).
    edges_.push_back({(uint32_t)u, (uint32_t)v});
    edge_at_[ekey(u, v)] = m;
    rebuild_all();
}

void ConnectivityState::delete_edge(size_t u, size_t v) {
    auto at = edge_at_.find(ekey(u, v));
    if (at == edge_at_.end()) throw std::invalid_argument("delete_edge: edge not present");
    size_t idx = at->second, last = edges_.size() - 1;

    // Move the doomed edge to the last index: conjugating by the transposition
    // relabels edges without changing any tracked submatrix content.
    if (idx != last) {
        swap_row_col(m_, idx, last);
        swap_row_col(minv_, idx, last);
        std::swap(edges_[idx], edges_[last]);
        edge_at_[ekey(edges_[idx][0], edges_[idx][1])] = idx;
        edge_at_[ekey(edges_[last][0], edges_[last][1])] = last;
        for (auto& [key, ps] : states_) {
            (void)key;
            for (size_t& e : ps.row_edges) e = e == idx ? last : e == last ? idx : e;
            for (size_t& e : ps.col_edges) e = e == idx ? last : e == last ? idx : e;
        }
    }

    // Rank-2 correction zeroing the last row and column of M while keeping
    // the -1 corner — the exact inverse of the bordering step of add_edge.
    DenseMatrix uu(last + 1, 2), vv(last + 1, 2);
    uu.at(last, 0) = F_.one();
    vv.at(last, 1) = F_.one();
    for (size_t i = 0; i < last; ++i) {
        uu.at(i, 1) = F_.neg(m_.at(i, last));
        vv.at(i, 0) = F_.neg(m_.at(last, i));
    }
    WoodburyFactors wf;
    try {
        wf = woodbury_update_factored(F_, minv_, uu, vv);
    } catch (const singular_matrix_error&) {
        // The remaining matrix drew a singular instantiation: resample it
        // wholesale (never expected at a 61-bit prime).
        edges_.pop_back();
        edge_at_.erase(at);
        rebuild_all();
        return;
    }

    for (auto& [key, ps] : states_) {
        (void)key;
        for (size_t f = 0; f < 2; ++f) {
            std::vector<Fp> a(ps.row_edges.size()), b(ps.col_edges.size());
            for (size_t q = 0; q < a.size(); ++q) a[q] = wf.W.at(ps.row_edges[q], f);
            for (size_t q = 0; q < b.size(); ++q) b[q] = wf.Z.at(ps.col_edges[q], f);
            ps.st.rank_one_update(a, b);
        }
    }

    // Shrink: the corrected inverse is block diagonal, so truncation is exact.
    m_ = drop_last_row_col(m_);
    minv_ = drop_last_row_col(wf.new_inverse);
    edges_.pop_back();
    edge_at_.erase(at);

    for (auto it = states_.begin(); it != states_.end();) {
        PairState& ps = it->second;
        auto rpos = std::find(ps.row_edges.begin(), ps.row_edges.end(), last);
        auto cpos = std::find(ps.col_edges.begin(), ps.col_edges.end(), last);
        bool kill_rows = rpos != ps.row_edges.end() && ps.row_edges.size() == 1;
        bool kill_cols = cpos != ps.col_edges.end() && ps.col_edges.size() == 1;
        if (kill_rows || kill_cols) {
            it = states_.erase(it); // re-materialized on a later query if needed
            continue;
        }
        if (rpos != ps.row_edges.end()) {
            ps.st.delete_row((size_t)(rpos - ps.row_edges.begin()));
            ps.row_edges.erase(rpos);
        }
        if (cpos != ps.col_edges.end()) {
            ps.st.delete_col((size_t)(cpos - ps.col_edges.begin()));
            ps.col_edges.erase(cpos);
        }
        ++it;
    }
}

void ConnectivityState::check_invariants() const {
    size_t m = edges_.size();
    if (m_.rows() != m || m_.cols() != m || minv_.rows() != m || minv_.cols() != m)
        throw std::logic_error("conn: matrix shape mismatch");
    if (!(multiply(F_, m_, minv_) == identity(m)))
        throw std::logic_error("conn: M * Minv != I");
    for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j < m; ++j) {
            Fp x = m_.at(i, j);
            if (i == j) {
                if (x.v != F_.from_int(-1).v) throw std::logic_error("conn: diagonal not -1");
            } else if (edges_[i][1] == edges_[j][0]) {
                if (x.v == 0) throw std::logic_error("conn: adjacency entry is zero");
            } else if (x.v != 0) {
                throw std::logic_error("conn: entry outside the stencil");
            }
        }
    for (const auto& [key, ps] : states_) {
        std::vector<size_t> rows = ps.row_edges, cols = ps.col_edges;
        std::sort(rows.begin(), rows.end());
        std::sort(cols.begin(), cols.end());
        if (rows != edges_with_tail(key.first) || cols != edges_with_head(key.second))
            throw std::logic_error("conn: pair state tracks the wrong edges");
        ps.st.check_invariants();
        if (!(ps.st.logical_matrix() == inverse_submatrix(ps.row_edges, ps.col_edges)))
            throw std::logic_error("conn: pair state diverged from the inverse submatrix");
    }
}

std::vector<std::string> run_conn_script(const PrimeField& F, const DiGraph& start,
                                         std::istream& script, SplitRng rng) {
    ConnectivityState state(F, start, std::move(rng));
    std::vector<std::string> out;

    auto parse_vertex = [&state](std::istringstream& in, size_t line_no, const char* op) {
        long long v = -1;
        if (!(in >> v) || v < 0 || (size_t)v >= state.vertex_count())
            throw io_error("script line " + std::to_string(line_no) + ": " + op +
                           " expects vertex ids below " + std::to_string(state.vertex_count()));
        return (size_t)v;
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

        if (op == "ADD" || op == "DEL") {
            size_t u = parse_vertex(in, line_no, op.c_str());
            size_t v = parse_vertex(in, line_no, op.c_str());
            expect_end(in, line_no);
            try {
                if (op == "ADD")
                    state.add_edge(u, v);
                else
                    state.delete_edge(u, v);
            } catch (const std::invalid_argument& e) {
                throw io_error("script line " + std::to_string(line_no) + ": " + e.what());
            }
        } else if (op == "QUERY") {
            size_t s = parse_vertex(in, line_no, "QUERY");
            size_t t = parse_vertex(in, line_no, "QUERY");
            expect_end(in, line_no);
            if (s == t)
                throw io_error("script line " + std::to_string(line_no) +
                               ": QUERY endpoints must differ");
            out.push_back(std::to_string(state.edge_connectivity(s, t)));
        } else if (op == "QUERYALL") {
            expect_end(in, line_no);
            for (size_t s = 0; s < state.vertex_count(); ++s) {
                std::string row;
                for (size_t t = 0; t < state.vertex_count(); ++t) {
                    if (t > 0) row += ' ';
                    row += std::to_string(s == t ? 0 : state.edge_connectivity(s, t));
                }
                out.push_back(std::move(row));
            }
        } else {
            throw io_error("script line " + std::to_string(line_no) + ": unknown operation '" +
                           op + "'");
        }
    }
    return out;
}

} // namespace fprank
