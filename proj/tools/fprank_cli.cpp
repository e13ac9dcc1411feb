// Command-line surface: binds the library's operations to files and scripts
// with deterministic seeding.  All randomness flows from one root seed
// through named substreams (subcommand, then trial), so identical inputs,
// flags, and seed produce byte-identical output.
//
// Exit codes: 0 success, 1 input error (malformed files, dimension
// mismatches, bad flags), 2 certified-verification failure after retries.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fprank/conn.hpp"
#include "fprank/dynrank.hpp"
#include "fprank/errors.hpp"
#include "fprank/ff.hpp"
#include "fprank/io.hpp"
#include "fprank/matching.hpp"
#include "fprank/matrix.hpp"
#include "fprank/matroid.hpp"
#include "fprank/rank.hpp"
#include "fprank/rng.hpp"
#include "fprank/superc.hpp"

using nlohmann::json;
using namespace fprank;

namespace {

struct CliConfig {
    uint64_t seed = 0;
    uint64_t prime = PrimeField::kDefaultPrime;
    int retries = 3;
    bool verify = true;
    uint64_t trials = 1;
    bool json_out = false;
};

// One trial's worth of output, assembled in both shapes so --json stays in
// lockstep with the plain-text lines.
struct Report {
    std::vector<std::string> lines;
    json j;
};

std::string join(const std::vector<size_t>& xs) {
    std::ostringstream out;
    for (size_t i = 0; i < xs.size(); ++i) out << (i ? " " : "") << xs[i];
    return out.str();
}

std::string join_values(const std::vector<Fp>& xs) {
    std::ostringstream out;
    for (size_t i = 0; i < xs.size(); ++i) out << (i ? " " : "") << xs[i].v;
    return out.str();
}

std::string join_dense_row(const DenseMatrix& m, size_t i) {
    std::ostringstream out;
    for (size_t j = 0; j < m.cols(); ++j) out << (j ? " " : "") << m.at(i, j).v;
    return out.str();
}

json dense_to_json(const DenseMatrix& m) {
    json rows = json::array();
    for (size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (size_t j = 0; j < m.cols(); ++j) row.push_back(m.at(i, j).v);
        rows.push_back(std::move(row));
    }
    return rows;
}

// Emit a dense matrix as `<label> rows cols` plus one line per row, and the
// JSON mirror under the same label.
void put_dense(Report& r, const std::string& label, const DenseMatrix& m) {
    r.lines.push_back(label + " " + std::to_string(m.rows()) + " " + std::to_string(m.cols()));
    for (size_t i = 0; i < m.rows(); ++i) r.lines.push_back(join_dense_row(m, i));
    r.j[label] = dense_to_json(m);
}

std::ifstream open_script(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open file: " + path);
    return in;
}

Graph to_graph(const RawGraph& raw) {
    Graph g;
    g.n = raw.n;
    for (auto [u, v] : raw.edges) g.edges.push_back({(uint32_t)u, (uint32_t)v});
    return g;
}

DiGraph to_digraph(const RawGraph& raw) {
    DiGraph g;
    g.n = raw.n;
    for (auto [u, v] : raw.edges) g.edges.push_back({(uint32_t)u, (uint32_t)v});
    return g;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact randomized rank toolkit over a prime field"};
    app.require_subcommand(1);

    CliConfig cfg;
    app.add_option("--seed", cfg.seed, "Root seed for all randomness")->envname("FPRANK_SEED");
    app.add_option("--prime", cfg.prime, "Field modulus (must be prime)")->envname("FPRANK_PRIME");
    app.add_option("--retries", cfg.retries, "Extra attempts after a failed certification")
        ->check(CLI::NonNegativeNumber);
    app.add_flag("--verify,!--no-verify", cfg.verify, "Certify randomized answers (default on)");
    app.add_option("--trials", cfg.trials, "Repeat over independent substreams")
        ->check(CLI::PositiveNumber);
    app.add_flag("--json", cfg.json_out, "Machine-readable output with the same values");

    auto add_cmd = [&](const std::string& name, const std::string& desc) {
        CLI::App* sub = app.add_subcommand(name, desc);
        sub->fallthrough(); // global flags may follow the subcommand
        return sub;
    };

    std::string mtx_path, mtx_path_b, graph_path, script_path, set_path;
    size_t opt_k = 0;
    bool extract = false;
    bool has_k = false;

    CLI::App* c_rank = add_cmd("rank", "Exact rank of a Matrix Market file");
    c_rank->add_option("matrix", mtx_path, "Matrix Market file")->required();

    CLI::App* c_atmost = add_cmd("rank-atmost", "min{rank, k} with one-sided error");
    c_atmost->add_option("matrix", mtx_path, "Matrix Market file")->required();
    c_atmost->add_option("-k", opt_k, "Rank cap")->required()->check(CLI::PositiveNumber);

    CLI::App* c_indep = add_cmd("indep-cols", "Indices of min{rank, k} independent columns");
    c_indep->add_option("matrix", mtx_path, "Matrix Market file")->required();
    c_indep->add_option("-k", opt_k, "Set size cap")->required()->check(CLI::PositiveNumber);

    CLI::App* c_null = add_cmd("nullspace", "Basis of the right nullspace");
    c_null->add_option("matrix", mtx_path, "Matrix Market file")->required();

    CLI::App* c_decomp = add_cmd("decompose", "Rank factorization A = B*C with witnesses");
    c_decomp->add_option("matrix", mtx_path, "Matrix Market file")->required();

    CLI::App* c_lrmul = add_cmd("lowrank-mul", "Product A*B through a rank factorization of A");
    c_lrmul->add_option("matrix_a", mtx_path, "Left factor (Matrix Market)")->required();
    c_lrmul->add_option("matrix_b", mtx_path_b, "Right factor (Matrix Market)")->required();

    CLI::App* c_dyn = add_cmd("dynrank", "Maintain rank under scripted updates");
    c_dyn->add_option("matrix", mtx_path, "Starting matrix (Matrix Market)")->required();
    c_dyn->add_option("--script", script_path, "Update script")->required();

    CLI::App* c_sc = add_cmd("sc-rank", "Rank via routing-network compression");
    c_sc->add_option("matrix", mtx_path, "Matrix Market file")->required();

    CLI::App* c_match = add_cmd("matching", "Maximum matching size of an undirected graph");
    c_match->add_option("graph", graph_path, "Edge-list graph file")->required();
    c_match->add_option("-k", opt_k, "Size cap")->check(CLI::PositiveNumber);
    c_match->add_flag("--extract", extract, "Also print the matched edges");

    CLI::App* c_submatch = add_cmd("subset-matching", "How many of the given vertices are matchable");
    c_submatch->add_option("graph", graph_path, "Edge-list graph file")->required();
    c_submatch->add_option("--set", set_path, "Vertex set file")->required();

    CLI::App* c_bases = add_cmd("disjoint-bases", "Pack disjoint column bases");
    c_bases->add_option("matrix", mtx_path, "Matrix Market file")->required();
    c_bases->add_option("-k", opt_k, "Exact number of bases to pack")->check(CLI::PositiveNumber);

    CLI::App* c_conn = add_cmd("conn", "Scripted edge-connectivity queries on a digraph");
    c_conn->add_option("graph", graph_path, "Edge-list digraph file")->required();
    c_conn->add_option("--script", script_path, "Query script")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help and friends
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    has_k = c_match->count("-k") > 0 || c_bases->count("-k") > 0;

    try {
        PrimeField F(cfg.prime); // rejects composite moduli
        RankOptions opts{cfg.verify, cfg.retries};
        SplitRng root(cfg.seed);
        CLI::App* sub = app.get_subcommands().front();
        SplitRng cmd_rng = root.fork(sub->get_name());

        // One trial of the selected subcommand on its own substream.
        auto run_trial = [&](SplitRng rng) -> Report {
            Report r;
            if (sub == c_rank) {
                RankResult res = rank(F, read_matrix_market_file(F, mtx_path), rng);
                r.lines.push_back("rank " + std::to_string(res.value));
                r.j["rank"] = res.value;
            } else if (sub == c_atmost) {
                RankResult res = rank_atmost(F, read_matrix_market_file(F, mtx_path), opt_k, rng);
                r.lines.push_back("rank-atmost " + std::to_string(res.value));
                r.j["rank_atmost"] = res.value;
            } else if (sub == c_indep) {
                IndexSet cols = indep_cols(F, read_matrix_market_file(F, mtx_path), opt_k, rng, opts);
                r.lines.push_back(cols.empty() ? "cols" : "cols " + join(cols));
                r.j["cols"] = cols;
            } else if (sub == c_null) {
                auto basis = nullspace_basis(F, read_matrix_market_file(F, mtx_path), rng, opts);
                r.lines.push_back("dim " + std::to_string(basis.size()));
                r.j["dim"] = basis.size();
                json vecs = json::array();
                for (const auto& v : basis) {
                    r.lines.push_back(join_values(v));
                    json jv = json::array();
                    for (Fp x : v) jv.push_back(x.v);
                    vecs.push_back(std::move(jv));
                }
                r.j["basis"] = std::move(vecs);
            } else if (sub == c_decomp) {
                RankOneDecomposition d =
                    rank_one_decompose(F, read_matrix_market_file(F, mtx_path), rng, opts);
                r.lines.push_back("rank " + std::to_string(d.T.size()));
                r.j["rank"] = d.T.size();
                r.lines.push_back(d.S.empty() ? "rows" : "rows " + join(d.S));
                r.j["rows"] = d.S;
                r.lines.push_back(d.T.empty() ? "cols" : "cols " + join(d.T));
                r.j["cols"] = d.T;
                put_dense(r, "B", d.B);
                put_dense(r, "C", d.C);
            } else if (sub == c_lrmul) {
                SparseMatrix a = read_matrix_market_file(F, mtx_path);
                DenseMatrix b = to_dense(F, read_matrix_market_file(F, mtx_path_b));
                put_dense(r, "product", lowrank_mul(F, a, b, rng, opts));
            } else if (sub == c_dyn) {
                DenseMatrix start = to_dense(F, read_matrix_market_file(F, mtx_path));
                auto script = open_script(script_path);
                for (size_t rk : run_dynrank_script(F, start, script, rng)) {
                    r.lines.push_back(std::to_string(rk));
                    r.j["ranks"].push_back(rk);
                }
                if (!r.j.contains("ranks")) r.j["ranks"] = json::array();
            } else if (sub == c_sc) {
                RankResult res = sc_rank(F, read_matrix_market_file(F, mtx_path), rng);
                r.lines.push_back("rank " + std::to_string(res.value));
                r.j["rank"] = res.value;
            } else if (sub == c_match) {
                Graph g = to_graph(read_graph_file(graph_path));
                validate_graph(g);
                size_t k = has_k ? opt_k : g.n / 2;
                size_t size = k == 0 ? 0 : matching_size(F, g, k, rng.fork("size"));
                r.lines.push_back("matching " + std::to_string(size));
                r.j["matching"] = size;
                if (extract) {
                    EdgeList edges = k == 0 ? EdgeList{}
                                            : find_matching(F, g, k, rng.fork("extract"), opts);
                    std::vector<std::pair<uint32_t, uint32_t>> out;
                    for (auto [u, v] : edges) out.push_back(std::minmax(u, v));
                    std::sort(out.begin(), out.end());
                    json je = json::array();
                    for (auto [u, v] : out) {
                        r.lines.push_back(std::to_string(u) + " " + std::to_string(v));
                        je.push_back({u, v});
                    }
                    r.j["edges"] = std::move(je);
                }
            } else if (sub == c_submatch) {
                Graph g = to_graph(read_graph_file(graph_path));
                validate_graph(g);
                IndexSet s = read_vertex_set_file(set_path);
                std::sort(s.begin(), s.end());
                if (std::adjacent_find(s.begin(), s.end()) != s.end())
                    throw io_error("vertex set: duplicate id");
                size_t size = subset_matching_size(F, g, s, rng);
                r.lines.push_back("matchable " + std::to_string(size));
                r.j["matchable"] = size;
            } else if (sub == c_bases) {
                DenseMatrix a = to_dense(F, read_matrix_market_file(F, mtx_path));
                std::optional<BasisPartition> parts;
                size_t count = 0;
                if (has_k) {
                    parts = disjoint_bases(F, a, opt_k, rng, opts);
                    count = opt_k;
                } else {
                    auto [k, p] = max_disjoint_bases(F, a, rng, opts);
                    parts = std::move(p);
                    count = k;
                }
                if (!parts) {
                    r.lines.push_back("none");
                    r.j["count"] = nullptr;
                } else {
                    r.lines.push_back("bases " + std::to_string(count));
                    r.j["count"] = count;
                    json jp = json::array();
                    for (const IndexSet& part : *parts) {
                        r.lines.push_back(part.empty() ? "" : join(part));
                        jp.push_back(part);
                    }
                    r.j["bases"] = std::move(jp);
                }
            } else if (sub == c_conn) {
                DiGraph g = to_digraph(read_graph_file(graph_path));
                auto script = open_script(script_path);
                r.j["answers"] = json::array();
                for (std::string& line : run_conn_script(F, g, script, rng)) {
                    r.j["answers"].push_back(line);
                    r.lines.push_back(std::move(line));
                }
            }
            return r;
        };

        std::vector<Report> reports;
        for (uint64_t t = 0; t < cfg.trials; ++t)
            reports.push_back(run_trial(cmd_rng.fork("trial" + std::to_string(t))));

        if (cfg.json_out) {
            if (cfg.trials == 1) {
                std::cout << reports[0].j.dump() << "\n";
            } else {
                json all = json::array();
                for (Report& r : reports) all.push_back(std::move(r.j));
                std::cout << all.dump() << "\n";
            }
        } else {
            for (uint64_t t = 0; t < reports.size(); ++t) {
                if (cfg.trials > 1) std::cout << "trial " << t << "\n";
                for (const std::string& line : reports[t].lines) std::cout << line << "\n";
            }
        }
        return 0;
    } catch (const verification_error& e) {
        std::cerr << "verification failed: " << e.what() << "\n";
        return 2;
    } catch (const io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
