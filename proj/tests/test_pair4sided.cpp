#include <gtest/gtest.h>

#include <random>

#include "test_util.hpp"
#include "topk2d/pair4sided.hpp"

using namespace topk2d;
using namespace topk2d::testing;

namespace {

std::string bits_of(const BitVector& b, size_t from, size_t len) {
    std::string s;
    for (size_t i = from; i < from + len && i < b.size(); ++i) s += b[i] ? '1' : '0';
    return s;
}

// encoding built from a grid that is gone before the first query
EncodedPair2xN encode_and_drop(const Grid2D& g, size_t k) {
    auto owned = std::make_unique<Grid2D>(g);
    EncodedPair2xN e = encode_2xn(*owned, k);
    owned.reset();
    return e;
}

void expect_all_ranges(const EncodedPair2xN& e, const Grid2D& g) {
    for (size_t a = 1; a <= g.n(); ++a)
        for (size_t b = a; b <= g.n(); ++b)
            for (size_t kq = 1; kq <= e.k; ++kq)
                ASSERT_EQ(query_2xn(e, a, b, kq), oracle_topk(g, 1, 2, a, b, kq)) << a << ".." << b << " k'=" << kq;
}

}  // namespace

TEST(Encode2xn, ExampleRootBits) {
    EncodedPair2xN e = encode_2xn(example9(), 3);
    EXPECT_EQ(bits_of(e.X, 0, 3), "001");
    EXPECT_EQ(e.X.size(), 13u);
    EXPECT_LE(e.X.size(), 4u * 9u);
    EXPECT_EQ(e.colCmp.size(), 9u);
    EXPECT_EQ(bits_of(e.colCmp, 0, 9), "100100100");
}

TEST(Encode2xn, SingleColumnStoresRootOnly) {
    for (size_t k : {2u, 3u, 7u}) {
        EncodedPair2xN e = encode_2xn(rows2({1}, {2}), k);
        EXPECT_EQ(bits_of(e.X, 0, 8), "10");
        EXPECT_EQ(query_2xn(e, 1, 1, 2), pos({{2, 1}, {1, 1}}));
    }
}

TEST(Query2xn, ExampleRanges) {
    EncodedPair2xN e = encode_and_drop(example9(), 3);
    EXPECT_EQ(query_2xn(e, 1, 9, 3), pos({{1, 2}, {1, 5}, {2, 5}}));
    EXPECT_EQ(query_2xn(e, 4, 5, 3), pos({{1, 5}, {2, 5}, {2, 4}}));
    EXPECT_EQ(query_2xn(e, 1, 1, 3), pos({{2, 1}, {1, 1}}));
    EXPECT_THROW(query_2xn(e, 0, 3, 1), std::out_of_range);
    EXPECT_THROW(query_2xn(e, 4, 3, 1), std::out_of_range);
    EXPECT_THROW(query_2xn(e, 1, 10, 1), std::out_of_range);
}

TEST(Query2xn, DecodedDagEqualsBuiltDag) {
    Grid2D g = example9();
    EncodedPair2xN e = encode_2xn(g, 3);
    std::string why;
    EXPECT_TRUE(same_dag(e.decoded(), build_dag(g, 3), &why)) << why;
}

TEST(Query2xn, ExhaustiveThreeColumns) {
    for_each_grid(3, [](const Grid2D& g) {
        for (size_t k = 1; k <= 6; ++k) expect_all_ranges(encode_and_drop(g, k), g);
    });
}

TEST(Query2xn, RandomGrids) {
    std::mt19937_64 rng(41);
    for (int t = 0; t < 150; ++t) {
        size_t n = 1 + rng() % 24, k = 1 + rng() % std::min<size_t>(2 * n, 10);
        Grid2D g = random_grid(2, n, rng);
        EncodedPair2xN e = encode_and_drop(g, k);
        EXPECT_LE(e.X.size(), 4 * n) << "n=" << n << " k=" << k;
        expect_all_ranges(e, g);
    }
}

TEST(Query2xn, SerializedBitsRoundTrip) {
    std::mt19937_64 rng(43);
    Grid2D g = random_grid(2, 15, rng);
    EncodedPair2xN e = encode_2xn(g, 4);
    ByteWriter w;
    e.serialize_bits(w);
    ByteReader r(w.bytes());
    EncodedPair2xN back = EncodedPair2xN::deserialize_bits(r, 15, 4, e.row1, e.row2);
    EXPECT_EQ(r.remaining(), 0u);
    EXPECT_EQ(back.X, e.X);
    expect_all_ranges(back, g);
}

TEST(Query2xn, CorruptBitsAreAFormatError) {
    EncodedPair2xN e = encode_2xn(example9(), 3);
    EncodedPair2xN bad;
    bad.n = e.n;
    bad.k = e.k;
    bad.row1 = e.row1;
    bad.row2 = e.row2;
    bad.colCmp = e.colCmp;
    bad.leafBits = e.leafBits;
    bad.X = e.X;
    bad.X.push_back(false);
    bad.X.build_index();
    EXPECT_THROW(bad.decoded(), format_error);
}

TEST(EncodeMxn, SingleRowHasNoPairs) {
    Grid2D g = grid_from_rows({{4, 1, 3, 2}});
    EncodedMxN e = encode_mxn(g, 2);
    EXPECT_TRUE(e.pairs.empty());
    EXPECT_EQ(query_mxn(e, 1, 1, 1, 4, 2), pos({{1, 1}, {1, 3}}));
}

TEST(EncodeMxn, ThreeRowsHaveThreePairs) {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 20; ++t) {
        EncodedMxN e = encode_mxn(random_grid(3, 3, rng), 3);
        EXPECT_EQ(e.pairs.size(), 3u);
        for (auto& [ab, p] : e.pairs) EXPECT_LE(p.X.size(), 12u);
        EXPECT_LE(e.x_bits(), 2u * 3 * 3 * 2);
    }
}

TEST(EncodeMxn, TwoRowsMatchPairEncoding) {
    EncodedMxN e = encode_mxn(example9(), 3);
    EncodedPair2xN p = encode_2xn(example9(), 3);
    ASSERT_EQ(e.pairs.size(), 1u);
    EXPECT_EQ(e.pair(1, 2).X, p.X);
    EXPECT_EQ(e.pair(1, 2).colCmp, p.colCmp);
    EXPECT_EQ(e.pair(1, 2).leafBits, p.leafBits);
}

TEST(EncodeMxn, MoreRowsThanColumnsIsAShapeError) {
    EXPECT_THROW(encode_mxn(grid_from_rows({{1, 2}, {3, 4}, {5, 6}}), 2), shape_error);
}

TEST(QueryMxn, ThreeByThreeExample) {
    EncodedMxN e = encode_mxn(grid_from_rows({{9, 1, 2}, {3, 8, 4}, {5, 6, 7}}), 3);
    EXPECT_EQ(query_mxn(e, 1, 3, 1, 3, 3), pos({{1, 1}, {2, 2}, {3, 3}}));
}

TEST(QueryMxn, SingleRowDelegates) {
    std::mt19937_64 rng(6);
    Grid2D g = random_grid(3, 6, rng);
    EncodedMxN e = encode_mxn(g, 3);
    for (size_t r = 1; r <= 3; ++r) EXPECT_EQ(query_mxn(e, r, r, 2, 5, 3), oracle_topk(g, r, r, 2, 5, 3));
}

TEST(QueryMxn, OversizedKReturnsWholeRectangle) {
    Grid2D g = grid_from_rows({{9, 1, 2}, {3, 8, 4}, {5, 6, 7}});
    EncodedMxN e = encode_mxn(g, 3);
    EXPECT_EQ(query_mxn(e, 1, 2, 2, 2, 3), oracle_topk(g, 1, 2, 2, 2, 3));
}

TEST(QueryMxn, AllRectanglesOfRandomGrids) {
    std::mt19937_64 rng(19);
    for (int t = 0; t < 12; ++t) {
        Grid2D g = random_grid(4, 8, rng);
        EncodedMxN e = encode_mxn(g, 5);
        for (size_t r1 = 1; r1 <= 4; ++r1)
            for (size_t r2 = r1; r2 <= 4; ++r2)
                for (size_t c1 = 1; c1 <= 8; ++c1)
                    for (size_t c2 = c1; c2 <= 8; ++c2)
                        for (size_t kq = 1; kq <= 5; ++kq)
                            ASSERT_EQ(query_mxn(e, r1, r2, c1, c2, kq), oracle_topk(g, r1, r2, c1, c2, kq));
    }
}
