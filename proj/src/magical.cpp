#include "fprank/magical.hpp"

#include <numeric>
#include <stdexcept>

namespace fprank {
namespace {

std::vector<uint32_t> random_permutation(size_t n, SplitRng& rng) {
    std::vector<uint32_t> p(n);
    std::iota(p.begin(), p.end(), 0);
    for (size_t i = n; i-- > 1;) std::swap(p[i], p[rng.below(i + 1)]);
    return p;
}

} // namespace

size_t MagicalGraph::y_degree(size_t y) const {
    size_t d = 0;
    for (const auto& t : targets) d += (t[0] == y) + (t[1] == y);
    return d;
}

MagicalGraph gen_magical(size_t x_size, size_t y_size, SplitRng& rng) {
    if (y_size < 1 || x_size < y_size)
        throw std::invalid_argument("gen_magical: requires x_size >= y_size >= 1");
    const size_t group = (x_size + y_size - 1) / y_size; // ceil
    const size_t padded = y_size * group;
    std::vector<uint32_t> m1 = random_permutation(padded, rng);
    std::vector<uint32_t> m2 = random_permutation(padded, rng);
    MagicalGraph g;
    g.x_size = x_size;
    g.y_size = y_size;
    g.targets.resize(x_size);
    // Merging consecutive groups of the padded right side into one Y vertex
    // and dropping the padded X vertices only lowers degrees, so the bounds
    // survive: deg(x) = 2 exactly, deg(y) <= 2 * group.
    for (size_t i = 0; i < x_size; ++i)
        g.targets[i] = {(uint32_t)(m1[i] / group), (uint32_t)(m2[i] / group)};
    return g;
}

IndexSet CompressionOperator::lift(const IndexSet& target_cols_set) const {
    if (is_identity) return target_cols_set;
    std::vector<char> in_set(target_cols, 0);
    for (size_t y : target_cols_set) in_set[y] = 1;
    IndexSet out;
    for (size_t x = 0; x < graph.x_size; ++x)
        if (in_set[graph.targets[x][0]] || in_set[graph.targets[x][1]]) out.push_back(x);
    return out;
}

ColCompression compress_cols(const PrimeField& F, const SparseMatrix& a, size_t k, SplitRng& rng) {
    if (k < 1) throw std::invalid_argument("compress_cols: requires k >= 1");
    const size_t target = 11 * k;
    ColCompression out;
    out.op.source_cols = a.cols;
    if (a.cols <= target) {
        out.op.is_identity = true;
        out.op.target_cols = a.cols;
        out.matrix = a;
        return out;
    }
    out.op.is_identity = false;
    out.op.target_cols = target;
    out.op.graph = gen_magical(a.cols, target, rng);
    out.op.coeffs.resize(a.cols);
    for (size_t x = 0; x < a.cols; ++x) {
        out.op.coeffs[x][0] = F.sample(rng);
        out.op.coeffs[x][1] = F.sample(rng);
    }
    out.matrix = SparseMatrix(a.rows, target);
    out.matrix.entries.reserve(2 * a.entries.size());
    // One triplet per edge per input triplet: |B| = 2 |A| exactly, zero
    // products included, so sketch size is predictable for any input.
    for (const Triplet& e : a.entries) {
        const auto& tg = out.op.graph.targets[e.col];
        const auto& cf = out.op.coeffs[e.col];
        out.matrix.entries.push_back(Triplet{e.row, tg[0], F.mul(cf[0], e.value)});
        out.matrix.entries.push_back(Triplet{e.row, tg[1], F.mul(cf[1], e.value)});
    }
    return out;
}

ColCompression compress_rows(const PrimeField& F, const SparseMatrix& a, size_t k, SplitRng& rng) {
    ColCompression ct = compress_cols(F, transpose(a), k, rng);
    ColCompression out;
    out.matrix = transpose(ct.matrix);
    out.op = std::move(ct.op); // operator indices refer to rows of `a`
    return out;
}

} // namespace fprank
