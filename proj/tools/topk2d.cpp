// topk2d: generate grids, build and query encodings, run verification suites.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "topk2d/bounds.hpp"
#include "topk2d/container.hpp"
#include "topk2d/fastquery.hpp"
#include "topk2d/topk_dag.hpp"
#include "topk2d/verify.hpp"

using namespace topk2d;

namespace {

constexpr int kOk = 0, kFail = 1, kUsage = 2;

struct usage_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

Grid2D load_grid(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw usage_error("cannot open " + path);
    return read_grid_csv(in);
}

std::vector<uint8_t> load_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw usage_error("cannot open " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void emit(const std::string& out, const std::string& text) {
    if (out.empty() || out == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f) throw usage_error("cannot write " + out);
    f << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Top-k encodings for 2D arrays"};
    app.require_subcommand(1);

    uint64_t seed = 1;
    size_t m = 2, n = 9, k = 3;
    std::string out, variant = "thm4", grid_path, enc_path, scope = "all", mode = "sorted", bound_variant;
    double budget = 60;
    bool trace = false, candidates = false;
    size_t r1 = 1, r2 = 2, c1 = 1, c2 = 1, kq = 1, enum_i = 0;

    auto* gen = app.add_subcommand("gen", "write a random permutation grid as CSV");
    gen->add_option("--seed", seed, "random seed");
    gen->add_option("--m", m, "rows")->check(CLI::PositiveNumber);
    gen->add_option("--n", n, "columns")->check(CLI::PositiveNumber);
    gen->add_option("--out", out, "output file (default stdout)");

    auto* build = app.add_subcommand("build", "encode a grid and print a space report");
    build->add_option("grid", grid_path, "grid CSV")->required();
    build->add_option("--k", k, "k")->required();
    build->add_option("--variant", variant, "thm1..thm6")->required();
    build->add_option("--out", out, "encoding file");

    auto* qry = app.add_subcommand("query", "answer a top-k query from an encoding file");
    qry->add_option("encoding", enc_path, "encoding file")->required();
    qry->add_option("r1", r1)->required();
    qry->add_option("r2", r2)->required();
    qry->add_option("c1", c1)->required();
    qry->add_option("c2", c2)->required();
    qry->add_option("kq", kq, "k'")->required();
    qry->add_option("mode", mode, "sorted or unsorted")->check(CLI::IsMember({"sorted", "unsorted"}));

    auto* ver = app.add_subcommand("verify", "run property suites against brute force");
    ver->add_option("scope", scope, "all, dag, encodings, fastquery or bounds")
        ->check(CLI::IsMember({"all", "dag", "encodings", "fastquery", "bounds"}));
    ver->add_option("--budget", budget, "seconds");
    ver->add_option("--seed", seed, "random seed");
    ver->add_option("--out", out, "JSON summary file (default stdout)");

    auto* dump = app.add_subcommand("dag-dump", "print the dag of a 2 x n grid as DOT");
    dump->add_option("grid", grid_path, "grid CSV")->required();
    dump->add_option("--k", k, "k")->required();
    dump->add_flag("--trace", trace, "annotate nodes with the picks of the traversal");
    dump->add_flag("--candidates", candidates, "print the candidate graphs instead");
    dump->add_option("--out", out, "output file (default stdout)");

    auto* bnd = app.add_subcommand("bounds", "evaluate lower bounds");
    bnd->add_option("--n", n, "columns")->check(CLI::PositiveNumber);
    bnd->add_option("--k", k, "k")->check(CLI::PositiveNumber);
    bnd->add_option("--variant", bound_variant, "unsorted-3sided, sorted-3sided or sorted-4sided");
    bnd->add_option("--enumerate", enum_i, "also enumerate U_i up to this i");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (*gen) {
            if (m > n) throw usage_error("grids need m <= n");
            std::mt19937_64 rng(seed);
            std::ostringstream s;
            write_grid_csv(s, random_grid(m, n, rng));
            emit(out, s.str());
            return kOk;
        }
        if (*build) {
            Grid2D g = load_grid(grid_path);
            if (g.m() > g.n()) throw usage_error("grids need m <= n");
            Container c = build_container(g, k, parse_variant(variant));
            auto bytes = serialize(c);
            if (!out.empty()) emit(out, std::string(bytes.begin(), bytes.end()));
            auto rep = space_report(c);
            rep["container_bytes"] = bytes.size();
            std::cout << rep.dump(2) << "\n";
            return kOk;
        }
        if (*qry) {
            Container c = deserialize_container(load_bytes(enc_path));
            TopKQuery q{r1, r2, c1, c2, kq, mode == "sorted" ? Mode::sorted : Mode::unsorted};
            for (Position p : query(c, q)) std::cout << to_string(p) << "\n";
            return kOk;
        }
        if (*ver) {
            if (const char* env = std::getenv("TOPK2D_VERIFY_SEED")) seed = std::stoull(env);
            VerifyOptions opt{scope, budget, seed};
            VerifyResult res = run_verify(opt, std::cerr);
            emit(out, res.summary.dump(2) + "\n");
            return res.ok ? kOk : kFail;
        }
        if (*dump) {
            Grid2D g = load_grid(grid_path);
            if (g.m() != 2) throw shape_error("dag-dump needs a 2 x n grid");
            if (candidates) {
                emit(out, graphs_to_dot(build_fast(g, k)));
                return kOk;
            }
            TopKDag dag = build_dag(g, k);
            if (trace) {
                TraversalTrace tr = traverse(dag, g);
                emit(out, to_dot(dag, &tr));
            } else {
                emit(out, to_dot(dag));
            }
            return kOk;
        }
        if (*bnd) {
            nlohmann::json j = nlohmann::json::array();
            std::vector<BoundVariant> vs;
            if (bound_variant.empty())
                vs = {BoundVariant::unsorted_3sided, BoundVariant::sorted_3sided, BoundVariant::sorted_4sided};
            else
                vs = {parse_bound_variant(bound_variant)};
            for (BoundVariant v : vs) {
                BoundReport r = lower_bound_bits(n, k, v);
                j.push_back({{"n", r.n},
                             {"k", r.k},
                             {"variant", to_string(r.variant)},
                             {"bits", r.bits},
                             {"expression", r.expression},
                             {"headline", r.headline},
                             {"headline_bits", r.headline_bits}});
            }
            nlohmann::json outj = {{"bounds", j}};
            if (enum_i) {
                size_t ke = k % 2 ? k - 1 : k;
                for (size_t i = 1; i <= enum_i; ++i)
                    outj["U"].push_back({{"i", i},
                                         {"k", ke},
                                         {"enumerated", enumerate_U(i, ke).count},
                                         {"recurrence", recurrence_U(i)}});
            }
            std::cout << outj.dump(2) << "\n";
            return kOk;
        }
    } catch (const usage_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {  // shape errors and unsupported queries
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::length_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const format_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << "\n";
        return kFail;
    }
    return kUsage;
}
