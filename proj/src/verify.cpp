#include "topk2d/verify.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <optional>
#include <ostream>

#include "topk2d/bounds.hpp"
#include "topk2d/topk_dag.hpp"

namespace topk2d {

namespace {

std::string describe(const std::string& label, const TopKQuery& q, const AnswerList& got, const AnswerList& want) {
    return label + " rows " + std::to_string(q.r1) + ".." + std::to_string(q.r2) + " cols " + std::to_string(q.c1) +
           ".." + std::to_string(q.c2) + " k'=" + std::to_string(q.k) + ": got [" + to_string(got) + "] want [" +
           to_string(want) + "]";
}

// queries the variant can answer on an m x n grid
std::vector<TopKQuery> queries_for(Variant v, size_t m, size_t n, size_t k) {
    std::vector<TopKQuery> qs;
    if (v == Variant::thm1 || v == Variant::thm2 || v == Variant::thm3) {
        for (size_t i = 1; i <= n; ++i) {
            if (v == Variant::thm1) {
                qs.push_back({1, 2, 1, i, k, Mode::unsorted});
                continue;
            }
            for (size_t kq = 1; kq <= k; ++kq) qs.push_back({1, 2, 1, i, kq, Mode::sorted});
        }
        return qs;
    }
    for (size_t r1 = 1; r1 <= m; ++r1)
        for (size_t r2 = r1; r2 <= m; ++r2)
            for (size_t c1 = 1; c1 <= n; ++c1)
                for (size_t c2 = c1; c2 <= n; ++c2)
                    for (size_t kq = 1; kq <= k; ++kq) qs.push_back({r1, r2, c1, c2, kq, Mode::sorted});
    return qs;
}

std::vector<Mismatch> check_container(const Grid2D& g, size_t k, Variant v, bool round_trip) {
    std::vector<Mismatch> out;
    Container c = build_container(g, k, v);
    std::optional<Container> loaded;
    if (round_trip) {
        auto bytes = serialize(c);
        loaded = deserialize_container(bytes);
        if (serialize(*loaded) != bytes) out.push_back({to_string(v) + ": re-serialized bytes differ"});
    }
    for (const TopKQuery& q : queries_for(v, g.m(), g.n(), k)) {
        AnswerList want = oracle_topk(g, q);
        AnswerList got = query(c, q);
        bool good = q.mode == Mode::unsorted ? same_set(got, want) : got == want;
        if (!good) out.push_back({describe(to_string(v), q, got, want)});
        if (loaded) {
            AnswerList again = query(*loaded, q);
            if (again != got) out.push_back({describe(to_string(v) + " after load", q, again, got)});
        }
        if (out.size() > 8) break;
    }
    return out;
}

}  // namespace

std::vector<Mismatch> check_variant(const Grid2D& g, size_t k, Variant v, bool round_trip) {
    if (g.m() != 2) throw shape_error("check_variant needs a 2 x n grid");
    return check_container(g, k, v, round_trip);
}

std::vector<Mismatch> check_mxn(const Grid2D& g, size_t k, bool round_trip) {
    return check_container(g, k, Variant::thm5, round_trip);
}

// ------------------------------------------------------------------- suites

namespace {

using Clock = std::chrono::steady_clock;

struct Budget {
    Clock::time_point end;
    explicit Budget(double seconds)
        : end(Clock::now() + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(seconds))) {}
    bool left() const { return Clock::now() < end; }
};

// all 2 x n grids for small n
template <class F>
void for_each_small_grid(size_t n, F&& fn) {
    std::vector<uint32_t> cells(2 * n);
    std::iota(cells.begin(), cells.end(), 1u);
    do fn(Grid2D(2, n, cells));
    while (std::next_permutation(cells.begin(), cells.end()));
}

nlohmann::json suite_dag(const Budget& budget, std::mt19937_64& rng, std::ostream& log, bool& ok) {
    size_t grids = 0, max_picks = 0, three_pick = 0, fallbacks = 0, max_x = 0, x_over = 0;
    double max_ratio = 0, max_nonleaf_ratio = 0;
    std::vector<std::string> witnesses;
    auto run = [&](const Grid2D& g, size_t k) {
        TopKDag dag = build_dag(g, k);
        TraversalTrace tr = traverse(dag, g);
        DagReport rep = verify_dag_properties(dag, tr, g);
        ++grids;
        max_picks = std::max(max_picks, rep.max_picks);
        three_pick += rep.max_picks > 2;
        fallbacks += tr.fallbacks;
        max_ratio = std::max(max_ratio, rep.nodes_per_kn);
        max_nonleaf_ratio = std::max(max_nonleaf_ratio, double(rep.nonleaf) / double(k * g.n()));
        max_x = std::max(max_x, tr.x_bits());
        x_over += tr.x_bits() > 4 * g.n();
        if (!rep.ok() && witnesses.size() < 5) {
            std::string w = "n=" + std::to_string(g.n()) + " k=" + std::to_string(k) + " rows [";
            for (size_t c = 1; c <= g.n(); ++c) w += (c > 1 ? "," : "") + std::to_string(g.at(1, c));
            w += "]/[";
            for (size_t c = 1; c <= g.n(); ++c) w += (c > 1 ? "," : "") + std::to_string(g.at(2, c));
            w += "]";
            for (auto& s : rep.witnesses) w += "; " + s;
            witnesses.push_back(w);
        }
        if (!rep.ok() || tr.x_bits() > 4 * g.n()) ok = false;
    };
    for (size_t n = 1; n <= 3; ++n)
        for_each_small_grid(n, [&](const Grid2D& g) {
            for (size_t k = 1; k <= 2 * n; ++k) run(g, k);
        });
    while (budget.left()) {
        size_t n = std::uniform_int_distribution<size_t>(1, 40)(rng);
        size_t k = std::uniform_int_distribution<size_t>(1, std::min<size_t>(2 * n, 12))(rng);
        run(random_grid(2, n, rng), k);
    }
    log << "dag: " << grids << " dags, max picks " << max_picks << ", grids with a 3-pick " << three_pick
        << ", max nodes/(kn) " << max_ratio << "\n";
    return {{"grids", grids},
            {"max_picks", max_picks},
            {"grids_with_three_picks", three_pick},
            {"fallback_steps", fallbacks},
            {"max_nodes_per_kn", max_ratio},
            {"max_nonleaf_per_kn", max_nonleaf_ratio},
            {"max_x_bits", max_x},
            {"x_over_4n", x_over},
            {"witnesses", witnesses}};
}

nlohmann::json suite_encodings(const Budget& budget, std::mt19937_64& rng, std::ostream& log, bool& ok) {
    size_t checks = 0;
    std::vector<std::string> witnesses;
    auto note = [&](const std::vector<Mismatch>& ms) {
        ++checks;
        for (auto& m : ms) {
            ok = false;
            if (witnesses.size() < 8) witnesses.push_back(m.what);
        }
    };
    auto all_variants = [&](const Grid2D& g, size_t k, bool rt) {
        for (Variant v : {Variant::thm1, Variant::thm2, Variant::thm3})
            if (k > 1) note(check_variant(g, k, v, rt));
        note(check_variant(g, k, Variant::thm4, rt));
        note(check_variant(g, k, Variant::thm6, rt));
    };
    for (size_t n = 1; n <= 3; ++n)
        for_each_small_grid(n, [&](const Grid2D& g) {
            for (size_t k = 1; k <= 2 * n; ++k) all_variants(g, k, false);
        });
    while (budget.left()) {
        size_t n = std::uniform_int_distribution<size_t>(1, 24)(rng);
        size_t k = std::uniform_int_distribution<size_t>(1, std::min<size_t>(2 * n, 8))(rng);
        all_variants(random_grid(2, n, rng), k, true);
        size_t mn = std::uniform_int_distribution<size_t>(1, 8)(rng);
        size_t mm = std::uniform_int_distribution<size_t>(1, std::min<size_t>(mn, 4))(rng);
        size_t km = std::uniform_int_distribution<size_t>(1, std::min<size_t>(mm * mn, 6))(rng);
        note(check_mxn(random_grid(mm, mn, rng), km, true));
    }
    log << "encodings: " << checks << " encodings checked, " << witnesses.size() << " mismatches\n";
    return {{"encodings", checks}, {"witnesses", witnesses}};
}

nlohmann::json suite_fastquery(const Budget& budget, std::mt19937_64& rng, std::ostream& log, bool& ok) {
    size_t graphs = 0, comparisons = 0, queries = 0;
    std::vector<std::string> witnesses;
    auto fail = [&](const std::string& s) {
        ok = false;
        if (witnesses.size() < 8) witnesses.push_back(s);
    };
    auto run = [&](const Grid2D& g, size_t k, bool all_compares) {
        FastQueryStructure fs = build_fast(g, k);
        for (const CandidateGraph* cg : {&fs.g12, &fs.g21}) {
            ++graphs;
            if (!verify_kpage(*cg, k).pass) fail("k-page check failed at n=" + std::to_string(g.n()));
        }
        size_t n = g.n();
        if (all_compares)
            for (size_t c1 = 1; c1 <= n; ++c1)
                for (size_t c2 = c1; c2 <= n; ++c2)
                    for (size_t p = 1; p <= c2 - c1 + 1; ++p)
                        for (size_t q = 1; q <= c2 - c1 + 1 && p + q <= k + 1; ++q) {
                            ++comparisons;
                            bool want = g.at(1, fs.row1->kth(c1, c2, p)) > g.at(2, fs.row2->kth(c1, c2, q));
                            if (compare_candidates(fs, p, q, c1, c2) != want) fail("comparison wrong");
                        }
        for (size_t c1 = 1; c1 <= n; ++c1)
            for (size_t c2 = c1; c2 <= n; ++c2) {
                ++queries;
                FastQueryStats st;
                AnswerList got = query_fast(fs, c1, c2, k, &st);
                if (got != oracle_topk(g, 1, 2, c1, c2, k)) fail("query mismatch");
                if (st.comparisons > 2 * k) fail("too many comparisons");
            }
    };
    for (size_t n = 1; n <= 3; ++n)
        for_each_small_grid(n, [&](const Grid2D& g) {
            for (size_t k = 1; k <= 2 * n; ++k) run(g, k, true);
        });
    while (budget.left()) {
        size_t n = std::uniform_int_distribution<size_t>(1, 40)(rng);
        size_t k = std::uniform_int_distribution<size_t>(1, 8)(rng);
        run(random_grid(2, n, rng), k, n <= 16);
    }
    log << "fastquery: " << graphs << " graphs, " << comparisons << " comparisons, " << queries << " queries\n";
    return {{"graphs", graphs}, {"comparisons", comparisons}, {"queries", queries}, {"witnesses", witnesses}};
}

nlohmann::json suite_bounds(std::ostream& log, bool& ok) {
    nlohmann::json rows = nlohmann::json::array();
    for (size_t k : {2, 4})
        for (size_t i = 1; i <= 6; ++i) {
            uint64_t e = enumerate_U(i, k).count, r = recurrence_U(i);
            rows.push_back({{"i", i}, {"k", k}, {"enumerated", e}, {"recurrence", r}});
            if (e != r) ok = false;
            log << "bounds: U_" << i << " k=" << k << " enumerated " << e << " recurrence " << r << "\n";
        }
    bool binom = true;
    for (size_t i = 1; i <= 64; ++i) binom = binom && central_binomial_lower_bound_holds(i);
    for (size_t i = 1; i <= 4; ++i) binom = binom && BigInt(enumerate_sorted_classes(i)) == count_sorted_classes(i);
    if (!binom) ok = false;
    log << "bounds: central binomial checks " << (binom ? "pass" : "fail") << "\n";
    return {{"U", rows}, {"central_binomial", binom}};
}

}  // namespace

VerifyResult run_verify(const VerifyOptions& opt, std::ostream& log) {
    static const std::vector<std::string> scopes = {"dag", "encodings", "fastquery", "bounds"};
    if (opt.scope != "all" && std::find(scopes.begin(), scopes.end(), opt.scope) == scopes.end())
        throw std::invalid_argument("unknown scope: " + opt.scope);
    VerifyResult res;
    std::mt19937_64 rng(opt.seed);
    size_t timed = opt.scope == "all" ? 3 : 1;
    double share = opt.budget_seconds / double(timed);
    auto want = [&](const std::string& s) { return opt.scope == "all" || opt.scope == s; };
    res.summary["seed"] = opt.seed;
    if (want("bounds")) {
        bool ok = true;
        res.summary["bounds"] = suite_bounds(log, ok);
        res.summary["bounds"]["ok"] = ok;
        res.ok = res.ok && ok;
    }
    // each timed suite gets an equal share of the budget
    if (want("dag")) {
        bool ok = true;
        res.summary["dag"] = suite_dag(Budget(share * 0.8), rng, log, ok);
        res.summary["dag"]["ok"] = ok;
        res.ok = res.ok && ok;
    }
    if (want("encodings")) {
        bool ok = true;
        res.summary["encodings"] = suite_encodings(Budget(share * 0.8), rng, log, ok);
        res.summary["encodings"]["ok"] = ok;
        res.ok = res.ok && ok;
    }
    if (want("fastquery")) {
        bool ok = true;
        res.summary["fastquery"] = suite_fastquery(Budget(share * 0.8), rng, log, ok);
        res.summary["fastquery"]["ok"] = ok;
        res.ok = res.ok && ok;
    }
    res.summary["ok"] = res.ok;
    return res;
}

}  // namespace topk2d
