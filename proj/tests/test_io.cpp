#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "fprank/errors.hpp"
#include "fprank/io.hpp"
#include "fprank/matrix.hpp"
#include "fprank/rng.hpp"
#include "oracles.hpp"

using namespace fprank;
namespace oracle = fprank::testing;

namespace {

constexpr uint64_t kPrime = 2305843009213693951ULL;

SparseMatrix parse_mm(const PrimeField& F, const std::string& text) {
    std::istringstream in(text);
    return read_matrix_market(F, in);
}

RawGraph parse_graph(const std::string& text) {
    std::istringstream in(text);
    return read_graph(in);
}

std::vector<size_t> parse_vset(const std::string& text) {
    std::istringstream in(text);
    return read_vertex_set(in);
}

// Scratch file that cleans up after itself.
struct TempFile {
    std::filesystem::path path;

    explicit TempFile(const std::string& text) {
        path = std::filesystem::temp_directory_path() /
               ("fprank_io_test_" + std::to_string(counter()++));
        std::ofstream out(path);
        out << text;
    }
    ~TempFile() { std::filesystem::remove(path); }

    static size_t& counter() {
        static size_t c = 0;
        return c;
    }
};

} // namespace

TEST_CASE("matrix market: minimal file with comments and blank lines") {
    PrimeField F(kPrime);
    SparseMatrix a = parse_mm(F,
                              "%%MatrixMarket matrix coordinate integer general\n"
                              "% a comment\n"
                              "\n"
                              "2 3 2\n"
                              "% another comment between entries\n"
                              "1 1 5\n"
                              "2 3 -1\n");
    CHECK(a.rows == 2);
    CHECK(a.cols == 3);
    REQUIRE(a.entries.size() == 2);
    CHECK(a.entries[0].row == 0); // 1-based on disk, 0-based in memory
    CHECK(a.entries[0].col == 0);
    CHECK(a.entries[0].value.v == 5);
    CHECK(a.entries[1].row == 1);
    CHECK(a.entries[1].col == 2);
    CHECK(a.entries[1].value.v == kPrime - 1); // negatives reduce mod p
}

TEST_CASE("matrix market: header is case-insensitive past the banner") {
    PrimeField F(kPrime);
    SparseMatrix a = parse_mm(F,
                              "%%MatrixMarket Matrix Coordinate Integer General\n"
                              "1 1 1\n"
                              "1 1 3\n");
    CHECK(a.entries.size() == 1);
}

TEST_CASE("matrix market: empty matrix round trip") {
    PrimeField F(kPrime);
    SparseMatrix a = parse_mm(F,
                              "%%MatrixMarket matrix coordinate integer general\n"
                              "0 0 0\n");
    CHECK(a.rows == 0);
    CHECK(a.cols == 0);
    CHECK(a.entries.empty());

    std::ostringstream out;
    write_matrix_market(a, out);
    SparseMatrix b = parse_mm(F, out.str());
    CHECK(b.rows == 0);
    CHECK(b.cols == 0);
}

TEST_CASE("matrix market: write emits the exact documented layout") {
    SparseMatrix a(2, 2);
    a.add(0, 1, Fp{7});
    a.add(1, 0, Fp{9});
    std::ostringstream out;
    write_matrix_market(a, out);
    CHECK(out.str() ==
          "%%MatrixMarket matrix coordinate integer general\n"
          "2 2 2\n"
          "1 2 7\n"
          "2 1 9\n");
}

TEST_CASE("matrix market: random sparse matrices survive a round trip") {
    PrimeField F(kPrime);
    SplitRng rng(11);
    for (size_t trial = 0; trial < 50; ++trial) {
        SplitRng trng = rng.fork("t" + std::to_string(trial));
        size_t m = 1 + trng.below(12);
        size_t n = 1 + trng.below(12);
        size_t nnz = trng.below(m * n + 1);
        SparseMatrix a = oracle::random_sparse(F, m, n, nnz, trng);

        std::ostringstream out;
        write_matrix_market(a, out);
        std::istringstream in(out.str());
        SparseMatrix b = read_matrix_market(F, in);

        CHECK(b.rows == a.rows);
        CHECK(b.cols == a.cols);
        CHECK(to_dense(F, b) == to_dense(F, a));
    }
}

TEST_CASE("matrix market: duplicate entries accumulate through to_dense") {
    PrimeField F(kPrime);
    SparseMatrix a = parse_mm(F,
                              "%%MatrixMarket matrix coordinate integer general\n"
                              "1 1 2\n"
                              "1 1 3\n"
                              "1 1 4\n");
    CHECK(a.entries.size() == 2);
    CHECK(to_dense(F, a).at(0, 0).v == 7);
}

TEST_CASE("matrix market: malformed inputs are rejected") {
    PrimeField F(kPrime);
    // wrong banner
    CHECK_THROWS_AS(parse_mm(F, "%%NotMatrixMarket matrix coordinate integer general\n1 1 0\n"),
                    io_error);
    // unsupported format / field / symmetry
    CHECK_THROWS_AS(parse_mm(F, "%%MatrixMarket matrix array integer general\n1 1 0\n"), io_error);
    CHECK_THROWS_AS(parse_mm(F, "%%MatrixMarket matrix coordinate real general\n1 1 0\n"),
                    io_error);
    CHECK_THROWS_AS(parse_mm(F, "%%MatrixMarket matrix coordinate integer symmetric\n1 1 0\n"),
                    io_error);
    // structural problems
    CHECK_THROWS_AS(parse_mm(F, ""), io_error);
    CHECK_THROWS_AS(parse_mm(F, "%%MatrixMarket matrix coordinate integer general\n"), io_error);
    CHECK_THROWS_AS(parse_mm(F, "%%MatrixMarket matrix coordinate integer general\nnot numbers\n"),
                    io_error);
    CHECK_THROWS_AS(parse_mm(F, "%%MatrixMarket matrix coordinate integer general\n2 2 2\n1 1 5\n"),
                    io_error); // truncated entry list
    CHECK_THROWS_AS(parse_mm(F, "%%MatrixMarket matrix coordinate integer general\n2 2 1\nx y z\n"),
                    io_error);
    // out-of-range indices (remember: 1-based)
    CHECK_THROWS_AS(parse_mm(F, "%%MatrixMarket matrix coordinate integer general\n2 2 1\n0 1 5\n"),
                    io_error);
    CHECK_THROWS_AS(parse_mm(F, "%%MatrixMarket matrix coordinate integer general\n2 2 1\n3 1 5\n"),
                    io_error);
    CHECK_THROWS_AS(parse_mm(F, "%%MatrixMarket matrix coordinate integer general\n2 2 1\n1 3 5\n"),
                    io_error);
}

TEST_CASE("matrix market: file helpers read what write produced") {
    PrimeField F(kPrime);
    SparseMatrix a(3, 2);
    a.add(2, 1, Fp{42});
    std::ostringstream out;
    write_matrix_market(a, out);

    TempFile f(out.str());
    SparseMatrix b = read_matrix_market_file(F, f.path.string());
    CHECK(b.rows == 3);
    CHECK(b.cols == 2);
    CHECK(to_dense(F, b) == to_dense(F, a));

    CHECK_THROWS_AS(read_matrix_market_file(F, f.path.string() + ".does-not-exist"), io_error);
}

TEST_CASE("graph: edge list with comments parses") {
    RawGraph g = parse_graph("% path on three vertices\n"
                             "3 2\n"
                             "0 1\n"
                             "\n"
                             "1 2\n");
    CHECK(g.n == 3);
    REQUIRE(g.edges.size() == 2);
    CHECK(g.edges[0] == std::pair<size_t, size_t>{0, 1});
    CHECK(g.edges[1] == std::pair<size_t, size_t>{1, 2});
}

TEST_CASE("graph: empty graph and isolated vertices parse") {
    RawGraph g = parse_graph("0 0\n");
    CHECK(g.n == 0);
    CHECK(g.edges.empty());

    RawGraph h = parse_graph("5 0\n");
    CHECK(h.n == 5);
    CHECK(h.edges.empty());
}

TEST_CASE("graph: malformed inputs are rejected") {
    CHECK_THROWS_AS(parse_graph(""), io_error);
    CHECK_THROWS_AS(parse_graph("three two\n"), io_error);
    CHECK_THROWS_AS(parse_graph("3 2\n0 1\n"), io_error);      // truncated
    CHECK_THROWS_AS(parse_graph("3 1\n0 3\n"), io_error);      // endpoint out of range
    CHECK_THROWS_AS(parse_graph("3 1\n-1 2\n"), io_error);     // negative endpoint
    CHECK_THROWS_AS(parse_graph("3 1\n0\n"), io_error);        // missing endpoint
}

TEST_CASE("graph: file helper and missing-file error") {
    TempFile f("2 1\n0 1\n");
    RawGraph g = read_graph_file(f.path.string());
    CHECK(g.n == 2);
    CHECK(g.edges.size() == 1);
    CHECK_THROWS_AS(read_graph_file(f.path.string() + ".does-not-exist"), io_error);
}

TEST_CASE("vertex set: whitespace-separated ids") {
    CHECK(parse_vset("0 4 2") == std::vector<size_t>{0, 4, 2});
    CHECK(parse_vset("7\n1\t3 ") == std::vector<size_t>{7, 1, 3});
    CHECK(parse_vset("") == std::vector<size_t>{});
    CHECK(parse_vset("  \n ") == std::vector<size_t>{});
}

TEST_CASE("vertex set: malformed inputs are rejected") {
    CHECK_THROWS_AS(parse_vset("0 -3"), io_error);
    CHECK_THROWS_AS(parse_vset("0 abc"), io_error);
}

TEST_CASE("vertex set: file helper and missing-file error") {
    TempFile f("3 1 4\n");
    CHECK(read_vertex_set_file(f.path.string()) == std::vector<size_t>{3, 1, 4});
    CHECK_THROWS_AS(read_vertex_set_file(f.path.string() + ".does-not-exist"), io_error);
}
