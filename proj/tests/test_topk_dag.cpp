#include <gtest/gtest.h>

#include <functional>
#include <random>
#include <set>

#include "test_util.hpp"
#include "topk2d/topk_dag.hpp"

using namespace topk2d;
using namespace topk2d::testing;

namespace {

using Edge = std::pair<Interval, Interval>;

// direct recursion on the child rules, answers from the oracle
std::pair<std::set<Interval>, std::set<Edge>> recursive_dag(const Grid2D& g, size_t k) {
    std::set<Interval> nodes;
    std::set<Edge> edges;
    std::function<void(Interval)> go = [&](Interval iv) {
        if (!nodes.insert(iv).second) return;
        if (2 * iv.len() <= k) return;
        AnswerList top = oracle_topk(g, 1, 2, iv.a, iv.b, k);
        uint32_t lo = iv.b, hi = iv.a;
        for (Position p : top) {
            lo = std::min(lo, p.col);
            hi = std::max(hi, p.col);
        }
        if (iv.a < hi) {
            edges.insert({iv, Interval{iv.a, hi - 1}});
            go({iv.a, hi - 1});
        }
        if (lo < iv.b) {
            edges.insert({iv, Interval{lo + 1, iv.b}});
            go({lo + 1, iv.b});
        }
    };
    go({1, uint32_t(g.n())});
    return {nodes, edges};
}

void expect_matches_recursive(const Grid2D& g, size_t k) {
    TopKDag dag = build_dag(g, k);
    auto [nodes, edges] = recursive_dag(g, k);
    std::set<Interval> got;
    for (const auto& nd : dag.nodes) got.insert(nd.iv);
    EXPECT_EQ(got, nodes);
    auto e = dag.edges();
    EXPECT_EQ(std::set<Edge>(e.begin(), e.end()), edges);
    EXPECT_EQ(e.size(), edges.size());
}

std::string order_of(const TraversalTrace& tr) {
    std::string s;
    for (const auto& st : tr.steps) s += to_string(st.iv) + (st.visit == 2 ? "* " : " ");
    return s;
}

}  // namespace

TEST(BuildDag, ExampleShape) {
    TopKDag dag = build_dag(example9(), 3);
    EXPECT_EQ(dag.nodes.size(), 20u);
    EXPECT_EQ(dag.edge_count(), 22u);
    EXPECT_EQ(dag.nodes[0].iv, (Interval{1, 9}));
    ASSERT_EQ(dag.nodes[0].children.size(), 2u);
    EXPECT_EQ(dag.nodes[dag.nodes[0].children[0]].iv, (Interval{1, 4}));
    EXPECT_EQ(dag.nodes[dag.nodes[0].children[1]].iv, (Interval{3, 9}));
    const std::set<Interval> want = {{1, 9}, {1, 4}, {3, 9}, {1, 2}, {3, 6}, {6, 9}, {1, 1}, {2, 2}, {3, 4}, {4, 6},
                                     {6, 7}, {8, 9}, {3, 3}, {4, 4}, {5, 6}, {7, 7}, {8, 8}, {9, 9}, {5, 5}, {6, 6}};
    std::set<Interval> got;
    for (const auto& nd : dag.nodes) got.insert(nd.iv);
    EXPECT_EQ(got, want);
}

TEST(BuildDag, ExampleMatchesRecursion) { expect_matches_recursive(example9(), 3); }

TEST(BuildDag, TwoColumnsUnderLargeKIsOneLeaf) {
    TopKDag dag = build_dag(rows2({1, 4}, {3, 2}), 4);
    ASSERT_EQ(dag.nodes.size(), 1u);
    EXPECT_TRUE(dag.nodes[0].leaf);
    EXPECT_EQ(dag.nodes[0].iv, (Interval{1, 2}));
}

TEST(BuildDag, KOfOneMatchesRecursionOnAllThreeColumnGrids) {
    for_each_grid(3, [](const Grid2D& g) { expect_matches_recursive(g, 1); });
}

TEST(BuildDag, RandomGridsMatchRecursion) {
    std::mt19937_64 rng(8);
    for (int t = 0; t < 200; ++t) {
        size_t n = 1 + rng() % 20, k = 1 + rng() % (2 * n);
        expect_matches_recursive(random_grid(2, n, rng), k);
    }
}

TEST(BuildDag, LevelsAreLongestPaths) {
    TopKDag dag = build_dag(example9(), 3);
    std::vector<uint32_t> lvl(dag.nodes.size(), 0);
    for (size_t pass = 0; pass < dag.nodes.size(); ++pass)
        for (size_t v = 0; v < dag.nodes.size(); ++v)
            for (uint32_t c : dag.nodes[v].children) lvl[c] = std::max(lvl[c], lvl[v] + 1);
    for (size_t v = 0; v < dag.nodes.size(); ++v) EXPECT_EQ(dag.nodes[v].level, lvl[v]);
}

TEST(LocateNode, ExampleRanges) {
    TopKDag dag = build_dag(example9(), 3);
    EXPECT_EQ(locate_node(dag, 1, 9).iv, (Interval{1, 9}));
    EXPECT_EQ(locate_node(dag, 4, 5).iv, (Interval{4, 6}));
    EXPECT_EQ(locate_node(dag, 6, 6).iv, (Interval{6, 6}));
}

TEST(LocateNode, ShortRangeInsideTwoLeaves) {
    Grid2D g = rows2({1, 2, 3, 4}, {5, 6, 7, 8});
    TopKDag dag = build_dag(g, 4);
    size_t minimal = 0;
    for (const auto& nd : dag.nodes) {
        if (!nd.iv.contains(Interval{2, 2})) continue;
        bool child = false;
        for (uint32_t c : nd.children) child |= dag.nodes[c].iv.contains(Interval{2, 2});
        if (!child) {
            EXPECT_TRUE(nd.leaf);
            ++minimal;
        }
    }
    EXPECT_EQ(minimal, 2u);
    EXPECT_EQ(dag_query(dag, 2, 2, 4), oracle_topk(g, 1, 2, 2, 2, 4));
}

TEST(BuildDag, LeafContainsNodeOfAnotherParent) {
    TopKDag dag = build_dag(rows2({1, 4, 5, 2}, {6, 7, 8, 3}), 4);
    std::set<Interval> got;
    for (const auto& nd : dag.nodes) got.insert(nd.iv);
    EXPECT_EQ(got, (std::set<Interval>{{1, 4}, {1, 2}, {2, 4}, {2, 2}, {3, 4}}));
    for (const auto& nd : dag.nodes)
        if (nd.iv == Interval{1, 2}) EXPECT_TRUE(nd.leaf && nd.children.empty());
    DagReport r = verify_dag_properties(dag, traverse(dag, rows2({1, 4, 5, 2}, {6, 7, 8, 3})),
                                        rows2({1, 4, 5, 2}, {6, 7, 8, 3}));
    EXPECT_TRUE(r.containment_is_ancestry);
}

TEST(DagQuery, MatchesOracleOnEveryRange) {
    std::mt19937_64 rng(12);
    for (int t = 0; t < 100; ++t) {
        size_t n = 1 + rng() % 16, k = 1 + rng() % (2 * n);
        Grid2D g = random_grid(2, n, rng);
        TopKDag dag = build_dag(g, k);
        for (size_t a = 1; a <= n; ++a)
            for (size_t b = a; b <= n; ++b)
                for (size_t kq = 1; kq <= k; ++kq) ASSERT_EQ(dag_query(dag, a, b, kq), oracle_topk(g, 1, 2, a, b, kq));
    }
}

TEST(Traverse, ExampleOrder) {
    TraversalTrace tr = traverse(build_dag(example9(), 3), example9());
    EXPECT_EQ(order_of(tr),
              "[1,9] [1,4] [1,4]* [3,9] [1,2] [1,2]* [3,6] [6,9] [6,9]* [1,1] [2,2] [3,4] [4,6] [6,7] [8,9] "
              "[8,9]* [3,3] [4,4] [5,6] [7,7] [8,8] [9,9] [5,5] [6,6] ");
}

TEST(Traverse, ExamplePicksAndBits) {
    TraversalTrace tr = traverse(build_dag(example9(), 3), example9());
    ASSERT_FALSE(tr.steps.empty());
    EXPECT_EQ(tr.steps[0].picks, pos({{1, 2}, {1, 5}, {2, 5}}));
    EXPECT_EQ(tr.steps[0].bits, (std::vector<uint8_t>{0, 0, 1}));
    AnswerList picks;
    for (size_t s = 1; s < tr.steps.size(); ++s)
        for (Position p : tr.steps[s].picks) picks.push_back(p);
    EXPECT_EQ(picks, pos({{1, 3}, {2, 3}, {2, 7}, {2, 1}, {2, 2}, {1, 7}, {1, 8}, {2, 4}, {1, 6}, {1, 9}}));
    EXPECT_EQ(tr.root_bits, 3u);
    EXPECT_EQ(tr.x_bits(), 13u);
    EXPECT_EQ(tr.fallbacks, 0u);
    EXPECT_LE(tr.max_picks(), 2u);
}

TEST(Traverse, SingleColumnIsOneLeafStep) {
    Grid2D g = rows2({2}, {1});
    for (size_t k : {1u, 2u, 5u}) {
        TraversalTrace tr = traverse(build_dag(g, k), g);
        ASSERT_EQ(tr.steps.size(), 1u);
        EXPECT_EQ(tr.steps[0].leaf, k >= 2);
        EXPECT_EQ(tr.pick_bits, 0u);
    }
}

TEST(Traverse, Deterministic) {
    std::mt19937_64 rng(31);
    Grid2D g = random_grid(2, 30, rng);
    TopKDag dag = build_dag(g, 5);
    EXPECT_EQ(trace_json_lines(traverse(dag, g)), trace_json_lines(traverse(dag, g)));
}

TEST(VerifyDagProperties, Example) {
    Grid2D g = example9();
    TopKDag dag = build_dag(g, 3);
    DagReport r = verify_dag_properties(dag, traverse(dag, g), g);
    EXPECT_TRUE(r.ok());
    EXPECT_EQ(r.nodes, 20u);
    EXPECT_LE(r.nodes, 6u * 3 * 9);
}

TEST(VerifyDagProperties, ColumnMajorAscendingGrid) {
    for (size_t n : {4u, 9u, 33u}) {
        std::vector<int64_t> a, b;
        for (size_t c = 0; c < n; ++c) {
            a.push_back(int64_t(2 * c));
            b.push_back(int64_t(2 * c + 1));
        }
        Grid2D g = rows2(a, b);
        TopKDag dag = build_dag(g, 2);
        DagReport r = verify_dag_properties(dag, traverse(dag, g), g);
        EXPECT_TRUE(r.ok()) << n;
    }
}

TEST(VerifyDagProperties, ExhaustiveFourColumns) {
    for_each_grid(4, [](const Grid2D& g) {
        for (size_t k = 1; k <= 8; ++k) {
            TopKDag dag = build_dag(g, k);
            DagReport r = verify_dag_properties(dag, traverse(dag, g), g);
            ASSERT_TRUE(r.distinct_answers && r.containment_is_ancestry && r.locate_consistent && r.node_bound)
                << "k=" << k << " " << (r.witnesses.empty() ? "" : r.witnesses[0]);
        }
    });
}

TEST(VerifyDagProperties, RandomGrids) {
    std::mt19937_64 rng(77);
    for (int t = 0; t < 500; ++t) {
        size_t n = 1 + rng() % 64, k = 1 + rng() % (2 * n);
        Grid2D g = random_grid(2, n, rng);
        TopKDag dag = build_dag(g, k);
        DagReport r = verify_dag_properties(dag, traverse(dag, g), g);
        ASSERT_TRUE(r.distinct_answers && r.containment_is_ancestry && r.locate_consistent && r.node_bound)
            << "n=" << n << " k=" << k << " " << (r.witnesses.empty() ? "" : r.witnesses[0]);
    }
}

TEST(Export, DotAndJsonLines) {
    Grid2D g = example9();
    TopKDag dag = build_dag(g, 3);
    std::string dot = to_dot(dag);
    EXPECT_NE(dot.find("\"[1,9]\" -> \"[1,4]\""), std::string::npos);
    TraversalTrace tr = traverse(dag, g);
    std::string lines = trace_json_lines(tr);
    EXPECT_EQ(size_t(std::count(lines.begin(), lines.end(), '\n')), tr.steps.size());
}
