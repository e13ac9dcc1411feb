#include "fprank/io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace fprank {
namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return (char)std::tolower(c); });
    return s;
}

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open file: " + path);
    return in;
}

bool next_data_line(std::istream& in, std::string& line) {
    while (std::getline(in, line)) {
        size_t pos = line.find_first_not_of(" \t\r\n");
        if (pos == std::string::npos) continue;
        if (line[pos] == '%') continue;
        return true;
    }
    return false;
}

} // namespace

SparseMatrix read_matrix_market(const PrimeField& F, std::istream& in) {
    std::string header;
    if (!std::getline(in, header)) throw io_error("matrix market: empty input");
    std::istringstream hs(header);
    std::string banner, object, format, field, symmetry;
    hs >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%MatrixMarket" || lower(object) != "matrix")
        throw io_error("matrix market: bad header banner");
    if (lower(format) != "coordinate")
        throw io_error("matrix market: only coordinate format is supported");
    if (lower(field) != "integer")
        throw io_error("matrix market: only integer field is supported");
    if (lower(symmetry) != "general")
        throw io_error("matrix market: only general symmetry is supported");

    std::string line;
    if (!next_data_line(in, line)) throw io_error("matrix market: missing size line");
    std::istringstream ss(line);
    long long m = -1, n = -1, nnz = -1;
    ss >> m >> n >> nnz;
    if (!ss || m < 0 || n < 0 || nnz < 0) throw io_error("matrix market: bad size line");

    SparseMatrix a((size_t)m, (size_t)n);
    a.entries.reserve((size_t)nnz);
    for (long long t = 0; t < nnz; ++t) {
        if (!next_data_line(in, line)) throw io_error("matrix market: truncated entry list");
        std::istringstream es(line);
        long long i = 0, j = 0, v = 0;
        es >> i >> j >> v;
        if (!es) throw io_error("matrix market: bad entry line: " + line);
        if (i < 1 || i > m || j < 1 || j > n)
            throw io_error("matrix market: entry index out of range: " + line);
        a.entries.push_back(Triplet{(uint32_t)(i - 1), (uint32_t)(j - 1), F.from_int(v)});
    }
    return a;
}

SparseMatrix read_matrix_market_file(const PrimeField& F, const std::string& path) {
    auto in = open_or_throw(path);
    return read_matrix_market(F, in);
}

void write_matrix_market(const SparseMatrix& a, std::ostream& out) {
    out << "%%MatrixMarket matrix coordinate integer general\n";
    out << a.rows << " " << a.cols << " " << a.entries.size() << "\n";
    for (const Triplet& e : a.entries)
        out << (e.row + 1) << " " << (e.col + 1) << " " << e.value.v << "\n";
}

RawGraph read_graph(std::istream& in) {
    std::string line;
    if (!next_data_line(in, line)) throw io_error("graph: empty input");
    std::istringstream ss(line);
    long long n = -1, m = -1;
    ss >> n >> m;
    if (!ss || n < 0 || m < 0) throw io_error("graph: bad size line");
    RawGraph g;
    g.n = (size_t)n;
    g.edges.reserve((size_t)m);
    for (long long t = 0; t < m; ++t) {
        if (!next_data_line(in, line)) throw io_error("graph: truncated edge list");
        std::istringstream es(line);
        long long u = -1, v = -1;
        es >> u >> v;
        if (!es || u < 0 || v < 0 || u >= n || v >= n)
            throw io_error("graph: bad edge line: " + line);
        g.edges.emplace_back((size_t)u, (size_t)v);
    }
    return g;
}

RawGraph read_graph_file(const std::string& path) {
    auto in = open_or_throw(path);
    return read_graph(in);
}

std::vector<size_t> read_vertex_set(std::istream& in) {
    std::vector<size_t> out;
    long long v = 0;
    while (in >> v) {
        if (v < 0) throw io_error("vertex set: negative vertex id");
        out.push_back((size_t)v);
    }
    if (!in.eof() && in.fail()) throw io_error("vertex set: non-integer token");
    return out;
}

std::vector<size_t> read_vertex_set_file(const std::string& path) {
    auto in = open_or_throw(path);
    return read_vertex_set(in);
}

} // namespace fprank
