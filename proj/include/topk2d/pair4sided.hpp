#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>

#include "topk2d/bitseq.hpp"
#include "topk2d/core.hpp"
#include "topk2d/row_topk.hpp"
#include "topk2d/topk_dag.hpp"

namespace topk2d {

using RowPtr = std::shared_ptr<const PermutationRowEncoding>;

// 2 x n encoding: row encodings, X (root bits then pick bits), colCmp
// (bit i = 0 iff A[1][i] > A[2][i]) and leaf-merge bits.
class EncodedPair2xN {
public:
    size_t n = 0, k = 0;
    RowPtr row1, row2;
    BitVector X, colCmp, leafBits;

    // traversal replayed from the stored bits, built once
    const TopKDag& decoded() const;
    const TraversalTrace& decoded_trace() const;

    // payload without the row encodings
    void serialize_bits(ByteWriter& w) const;
    static EncodedPair2xN deserialize_bits(ByteReader& r, size_t n, size_t k, RowPtr row1, RowPtr row2);

private:
    struct Memo {
        std::once_flag once;
        TopKDag dag;
        TraversalTrace trace;
    };
    std::shared_ptr<Memo> memo_ = std::make_shared<Memo>();
};

// Comparisons read back from stored bits.
class StoredComparisons final : public ComparisonSource {
public:
    StoredComparisons(const BitVector& x, const BitVector& col, const BitVector& leaf)
        : x_(x), col_(col), leaf_(leaf) {}
    bool root(std::optional<Position>, std::optional<Position>) override { return next(x_, xi_) == 0; }
    bool pick(Position, Position) override { return next(x_, xi_) == 0; }
    bool column(uint32_t c) override;
    bool leaf(Position, Position) override { return next(leaf_, li_) == 0; }
    bool exhausted() const { return xi_ == x_.size() && li_ == leaf_.size(); }

private:
    static bool next(const BitVector& b, size_t& i);
    const BitVector &x_, &col_, &leaf_;
    size_t xi_ = 0, li_ = 0;
};

EncodedPair2xN encode_2xn(const Grid2D& g, size_t k, TraversalTrace* trace = nullptr);
EncodedPair2xN encode_2xn(const Grid2D& g, size_t k, RowPtr row1, RowPtr row2, TraversalTrace* trace = nullptr);
AnswerList query_2xn(const EncodedPair2xN& enc, size_t c1, size_t c2, size_t kq);

// m x n encoding: one row encoding per row and a 2 x n encoding per row pair.
class EncodedMxN {
public:
    size_t m = 0, n = 0, k = 0;
    std::vector<RowPtr> rows;
    std::map<std::pair<size_t, size_t>, EncodedPair2xN> pairs;  // (a,b), a < b

    const EncodedPair2xN& pair(size_t a, size_t b) const { return pairs.at({a, b}); }
    uint64_t x_bits() const;
    uint64_t column_bits() const;
    uint64_t leaf_bits() const;
};

EncodedMxN encode_mxn(const Grid2D& g, size_t k);
AnswerList query_mxn(const EncodedMxN& enc, size_t r1, size_t r2, size_t c1, size_t c2, size_t kq);

}  // namespace topk2d
