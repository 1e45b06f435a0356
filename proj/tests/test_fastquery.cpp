#include <gtest/gtest.h>

#include <random>

#include "test_util.hpp"
#include "topk2d/fastquery.hpp"

using namespace topk2d;
using namespace topk2d::testing;

namespace {

std::string bits_of(const BitVector& b) {
    std::string s;
    for (size_t i = 0; i < b.size(); ++i) s += b[i] ? '1' : '0';
    return s;
}

// edges straight from the definition: for each i, the j > i with the smallest A[to][j]
// above A[from][i] and at most k-1 cells of columns i..j larger than A[to][j]
EdgeList definition_edges(const Grid2D& g, size_t k, size_t from, size_t to) {
    EdgeList e;
    for (size_t i = 1; i <= g.n(); ++i) {
        uint32_t best = 0;
        for (size_t j = i + 1; j <= g.n(); ++j) {
            uint32_t v = g.at(to, j);
            if (v < g.at(from, i)) continue;
            size_t above = 0;
            for (size_t c = i; c <= j; ++c)
                for (size_t r = 1; r <= 2; ++r) above += g.at(r, c) > v;
            if (above > k - 1) continue;
            if (!best || v < g.at(to, best)) best = uint32_t(j);
        }
        if (best) e.push_back({uint32_t(i), best});
    }
    return e;
}

// p-th largest column of row r in [c1,c2]
uint32_t nth_col(const Grid2D& g, size_t r, size_t c1, size_t c2, size_t p) {
    AnswerList a = oracle_topk(g, r, r, c1, c2, p);
    return a.size() == p ? a.back().col : 0;
}

}  // namespace

TEST(BuildG12, HandCheckedThreeColumns) {
    Grid2D g = rows2({5, 1, 4}, {2, 6, 3});
    EXPECT_EQ(build_g12(g, 1).edges(), (EdgeList{{1, 2}}));
}

TEST(BuildG12, DominantRowOneHasNoEdges) {
    Grid2D g = rows2({7, 8, 9, 10}, {1, 2, 3, 4});
    EXPECT_EQ(build_g12(g, 3).edge_count(), 0u);
}

TEST(BuildG12, ExampleMatchesDefinition) {
    Grid2D g = example9();
    EXPECT_EQ(build_g12(g, 3).edges(), definition_edges(g, 3, 1, 2));
    EXPECT_EQ(build_g21(g, 3).edges(), definition_edges(g, 3, 2, 1));
}

TEST(BuildG12, RandomGridsMatchDefinition) {
    std::mt19937_64 rng(23);
    for (int t = 0; t < 300; ++t) {
        size_t n = 1 + rng() % 30, k = 1 + rng() % 8;
        Grid2D g = random_grid(2, n, rng);
        auto g12 = build_g12(g, k);
        auto g21 = build_g21(g, k);
        ASSERT_EQ(g12.edges(), definition_edges(g, k, 1, 2));
        ASSERT_EQ(g21.edges(), definition_edges(g, k, 2, 1));
        EXPECT_LE(g12.edge_count(), n);
    }
}

TEST(VerifyKpage, SingleEdgePasses) {
    for (size_t k : {1u, 2u, 5u}) EXPECT_TRUE(verify_kpage(EdgeList{{1, 4}}, k).pass);
}

TEST(VerifyKpage, TwoCrossingEdgesFailAtOnePage) {
    KPageResult r = verify_kpage(EdgeList{{1, 3}, {2, 4}}, 1);
    EXPECT_FALSE(r.pass);
    EXPECT_EQ(r.witness, (EdgeList{{1, 3}, {2, 4}}));
    EXPECT_TRUE(verify_kpage(EdgeList{{1, 3}, {2, 4}}, 2).pass);
}

TEST(VerifyKpage, NestedEdgesDoNotCross) {
    EXPECT_TRUE(verify_kpage(EdgeList{{1, 6}, {2, 5}, {3, 4}}, 1).pass);
    KPageResult r = verify_kpage(EdgeList{{1, 4}, {2, 5}, {3, 6}, {7, 8}}, 2);
    EXPECT_FALSE(r.pass);
    EXPECT_EQ(r.witness.size(), 3u);
}

TEST(VerifyKpage, MatchesBruteForceOnSmallEdgeSets) {
    std::mt19937_64 rng(29);
    for (int t = 0; t < 2000; ++t) {
        size_t m = 1 + rng() % 7, k = 1 + rng() % 3;
        EdgeList e;
        for (size_t s = 0; s < m; ++s) {
            uint32_t a = 1 + rng() % 9, b = 1 + rng() % 9;
            if (a == b) continue;
            e.push_back({std::min(a, b), std::max(a, b)});
        }
        // largest pairwise-crossing family, by subset search
        size_t best = 0;
        for (uint32_t mask = 1; mask < (1u << e.size()); ++mask) {
            EdgeList s;
            for (size_t x = 0; x < e.size(); ++x)
                if (mask >> x & 1) s.push_back(e[x]);
            std::sort(s.begin(), s.end());
            bool ok = true;
            for (size_t x = 0; x < s.size() && ok; ++x)
                for (size_t y = x + 1; y < s.size() && ok; ++y)
                    ok = s[x].first < s[y].first && s[y].first < s[x].second && s[x].second < s[y].second;
            if (ok) best = std::max(best, s.size());
        }
        EXPECT_EQ(verify_kpage(e, k).pass, best <= k);
    }
}

TEST(VerifyKpage, BuiltGraphsPass) {
    for (size_t n = 1; n <= 4; ++n)
        for_each_grid(n, [](const Grid2D& g) {
            for (size_t k = 1; k <= 4; ++k) {
                ASSERT_TRUE(verify_kpage(build_g12(g, k), k).pass);
                ASSERT_TRUE(verify_kpage(build_g21(g, k), k).pass);
            }
        });
    std::mt19937_64 rng(31);
    for (int t = 0; t < 1000; ++t) {
        size_t n = 2 + rng() % 60, k = 1 + rng() % 8;
        Grid2D g = random_grid(2, n, rng);
        ASSERT_TRUE(verify_kpage(build_g12(g, k), k).pass);
        ASSERT_TRUE(verify_kpage(build_g21(g, k), k).pass);
    }
}

TEST(AssignPages, PagesAreCrossingFree) {
    EdgeList e{{1, 4}, {2, 5}, {3, 6}, {4, 7}};
    auto pg = assign_pages(e);
    ASSERT_EQ(pg.size(), e.size());
    for (size_t x = 0; x < e.size(); ++x)
        for (size_t y = 0; y < e.size(); ++y)
            if (x != y && pg[x] == pg[y])
                EXPECT_FALSE(e[x].first < e[y].first && e[y].first < e[x].second && e[x].second < e[y].second);
}

TEST(BuildFast, ExampleBitStrings) {
    FastQueryStructure fs = build_fast(example9(), 3);
    EXPECT_EQ(bits_of(fs.P), "100100100");
    EXPECT_EQ(bits_of(fs.Q12), "01001011");
    EXPECT_EQ(fs.Q21.size(), 8u);
}

TEST(BuildFast, SingleColumn) {
    FastQueryStructure fs = build_fast(rows2({1}, {2}), 2);
    EXPECT_EQ(fs.P.size(), 1u);
    EXPECT_EQ(fs.Q12.size(), 0u);
    EXPECT_EQ(fs.Q21.size(), 0u);
    EXPECT_EQ(query_fast(fs, 1, 1, 2), pos({{2, 1}, {1, 1}}));
}

TEST(BuildFast, SpaceReport) {
    std::mt19937_64 rng(37);
    Grid2D g = random_grid(2, 50, rng);
    auto sp = build_fast(g, 4).space();
    EXPECT_EQ(sp.pq_bits, 50u + 49 + 49);
    EXPECT_EQ(sp.graph_budget_bits, (4u * 4 + 4) * 50);
    EXPECT_EQ(sp.extra_budget_bits, (4u * 4 + 7) * 50);
}

TEST(CompareCandidates, ExampleSameColumn) {
    FastQueryStructure fs = build_fast(example9(), 3);
    EXPECT_TRUE(compare_candidates(fs, 2, 1, 1, 9));
    EXPECT_THROW(compare_candidates(fs, 3, 2, 1, 9), std::invalid_argument);
}

TEST(CompareCandidates, ExhaustiveFourColumns) {
    for_each_grid(4, [](const Grid2D& g) {
        for (size_t k = 1; k <= 4; ++k) {
            FastQueryStructure fs = build_fast(g, k);
            for (size_t c1 = 1; c1 <= 4; ++c1)
                for (size_t c2 = c1; c2 <= 4; ++c2)
                    for (size_t p = 1; p <= c2 - c1 + 1; ++p)
                        for (size_t q = 1; q <= c2 - c1 + 1 && p + q <= k + 1; ++q) {
                            uint32_t a = nth_col(g, 1, c1, c2, p), b = nth_col(g, 2, c1, c2, q);
                            ASSERT_EQ(compare_candidates(fs, p, q, c1, c2), g.at(1, a) > g.at(2, b));
                        }
        }
    });
}

TEST(QueryFast, ExampleRoot) {
    FastQueryStructure fs = build_fast(example9(), 3);
    EXPECT_EQ(query_fast(fs, 1, 9, 3), pos({{1, 2}, {1, 5}, {2, 5}}));
    EXPECT_EQ(query_fast(fs, 7, 7, 2), pos({{2, 7}, {1, 7}}));
    EXPECT_THROW(query_fast(fs, 3, 2, 1), std::out_of_range);
}

TEST(QueryFast, AllRangesOfRandomGrids) {
    std::mt19937_64 rng(47);
    for (int t = 0; t < 1000; ++t) {
        size_t n = 1 + rng() % 50, k = 1 + rng() % 6;
        Grid2D g = random_grid(2, n, rng);
        FastQueryStructure fs = build_fast(g, k);
        for (size_t a = 1; a <= n; ++a)
            for (size_t b = a; b <= n; ++b) {
                size_t kq = 1 + (a + b) % k;
                FastQueryStats st;
                ASSERT_EQ(query_fast(fs, a, b, kq, &st), oracle_topk(g, 1, 2, a, b, kq));
                ASSERT_LE(st.comparisons, 2 * kq);
            }
    }
}

TEST(QueryFast, AgreesWithPairEncoding) {
    std::mt19937_64 rng(53);
    for (int t = 0; t < 30; ++t) {
        size_t n = 2 + rng() % 14, k = 2 + rng() % 4;
        Grid2D g = random_grid(2, n, rng);
        FastQueryStructure fs = build_fast(g, k);
        EncodedPair2xN e = encode_2xn(g, k);
        for (size_t a = 1; a <= n; ++a)
            for (size_t b = a; b <= n; ++b) ASSERT_EQ(query_fast(fs, a, b, k), query_2xn(e, a, b, k));
    }
}

TEST(FastQueryStructure, SerializeRoundTrip) {
    std::mt19937_64 rng(59);
    Grid2D g = random_grid(2, 20, rng);
    FastQueryStructure fs = build_fast(g, 3);
    ByteWriter w;
    fs.serialize_extra(w);
    ByteReader r(w.bytes());
    FastQueryStructure back = FastQueryStructure::deserialize_extra(r, 20, 3, fs.row1, fs.row2);
    EXPECT_EQ(r.remaining(), 0u);
    EXPECT_EQ(back.g12.right, fs.g12.right);
    EXPECT_EQ(back.g21.right, fs.g21.right);
    for (size_t a = 1; a <= 20; ++a)
        for (size_t b = a; b <= 20; ++b) ASSERT_EQ(query_fast(back, a, b, 3), oracle_topk(g, 1, 2, a, b, 3));
}

TEST(GraphsToDot, NamesBothGraphs) {
    std::string dot = graphs_to_dot(build_fast(example9(), 3));
    EXPECT_NE(dot.find("digraph"), std::string::npos);
}
