#include "topk2d/pair4sided.hpp"

#include <stdexcept>

namespace topk2d {

bool StoredComparisons::next(const BitVector& b, size_t& i) {
    if (i >= b.size()) throw format_error("encoding ran out of stored bits");
    return b.get(i++);
}

bool StoredComparisons::column(uint32_t c) {
    if (c < 1 || c > col_.size()) throw format_error("column comparison out of range");
    return col_.get(c - 1) == 0;
}

const TopKDag& EncodedPair2xN::decoded() const {
    std::call_once(memo_->once, [&] {
        StoredComparisons src(X, colCmp, leafBits);
        memo_->dag = replay_traversal(n, k, *row1, *row2, src, memo_->trace);
        if (!src.exhausted()) throw format_error("encoding has unread bits");
    });
    return memo_->dag;
}

const TraversalTrace& EncodedPair2xN::decoded_trace() const {
    decoded();
    return memo_->trace;
}

void EncodedPair2xN::serialize_bits(ByteWriter& w) const {
    X.serialize(w);
    colCmp.serialize(w);
    leafBits.serialize(w);
}

EncodedPair2xN EncodedPair2xN::deserialize_bits(ByteReader& r, size_t n, size_t k, RowPtr row1, RowPtr row2) {
    EncodedPair2xN e;
    e.n = n;
    e.k = k;
    e.row1 = std::move(row1);
    e.row2 = std::move(row2);
    e.X = BitVector::deserialize(r);
    e.colCmp = BitVector::deserialize(r);
    e.leafBits = BitVector::deserialize(r);
    if (e.colCmp.size() != n || e.row1->size() != n || e.row2->size() != n)
        throw format_error("pair encoding shape mismatch");
    return e;
}

EncodedPair2xN encode_2xn(const Grid2D& g, size_t k, RowPtr row1, RowPtr row2, TraversalTrace* trace) {
    if (g.m() != 2) throw shape_error("encode_2xn needs a 2 x n grid");
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    EncodedPair2xN e;
    e.n = g.n();
    e.k = k;
    e.row1 = std::move(row1);
    e.row2 = std::move(row2);
    GridComparisons src(g);
    TraversalTrace local;
    replay_traversal(e.n, k, *e.row1, *e.row2, src, trace ? *trace : local);
    for (uint8_t b : src.x_bits) e.X.push_back(b);
    for (uint8_t b : src.leaf_bits) e.leafBits.push_back(b);
    for (size_t c = 1; c <= e.n; ++c) e.colCmp.push_back(!(g.at(1, c) > g.at(2, c)));
    e.X.build_index();
    e.colCmp.build_index();
    e.leafBits.build_index();
    return e;
}

EncodedPair2xN encode_2xn(const Grid2D& g, size_t k, TraversalTrace* trace) {
    if (g.m() != 2) throw shape_error("encode_2xn needs a 2 x n grid");
    auto r1 = std::make_shared<const PermutationRowEncoding>(PermutationRowEncoding::encode_row(g.row(1)));
    auto r2 = std::make_shared<const PermutationRowEncoding>(PermutationRowEncoding::encode_row(g.row(2)));
    return encode_2xn(g, k, r1, r2, trace);
}

AnswerList query_2xn(const EncodedPair2xN& enc, size_t c1, size_t c2, size_t kq) {
    if (c1 < 1 || c1 > c2 || c2 > enc.n) throw std::out_of_range("column range out of bounds");
    return dag_query(enc.decoded(), c1, c2, kq);
}

// ---------------------------------------------------------------------- m x n

uint64_t EncodedMxN::x_bits() const {
    uint64_t t = 0;
    for (const auto& [ab, e] : pairs) t += e.X.size();
    return t;
}

uint64_t EncodedMxN::column_bits() const {
    uint64_t t = 0;
    for (const auto& [ab, e] : pairs) t += e.colCmp.size();
    return t;
}

uint64_t EncodedMxN::leaf_bits() const {
    uint64_t t = 0;
    for (const auto& [ab, e] : pairs) t += e.leafBits.size();
    return t;
}

EncodedMxN encode_mxn(const Grid2D& g, size_t k) {
    if (g.m() > g.n()) throw shape_error("m x n encoding needs m <= n");
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    EncodedMxN e;
    e.m = g.m();
    e.n = g.n();
    e.k = k;
    for (size_t r = 1; r <= e.m; ++r)
        e.rows.push_back(std::make_shared<const PermutationRowEncoding>(PermutationRowEncoding::encode_row(g.row(r))));
    for (size_t a = 1; a <= e.m; ++a)
        for (size_t b = a + 1; b <= e.m; ++b)
            e.pairs.emplace(std::pair{a, b}, encode_2xn(g.pair(a, b), k, e.rows[a - 1], e.rows[b - 1]));
    return e;
}

AnswerList query_mxn(const EncodedMxN& enc, size_t r1, size_t r2, size_t c1, size_t c2, size_t kq) {
    if (r1 < 1 || r1 > r2 || r2 > enc.m || c1 < 1 || c1 > c2 || c2 > enc.n)
        throw std::out_of_range("query rectangle out of range");
    if (kq < 1 || kq > enc.k) throw std::out_of_range("k' must be in 1..k");
    size_t width = c2 - c1 + 1;
    // per-row sorted candidates; at most kq from each row are ever needed
    std::vector<std::vector<uint32_t>> cand;
    for (size_t r = r1; r <= r2; ++r) cand.push_back(enc.rows[r - 1]->topk_sorted(c1, c2, kq));
    std::vector<size_t> used(cand.size(), 0);
    // row a's candidate beats row b's: whichever shows up first in the pair's top-k
    auto beats = [&](size_t ia, size_t ib) {
        size_t a = r1 + ia, b = r1 + ib;
        bool swapped = a > b;
        const auto& e = enc.pair(std::min(a, b), std::max(a, b));
        Position pa{swapped ? 2u : 1u, cand[ia][used[ia]]};
        Position pb{swapped ? 1u : 2u, cand[ib][used[ib]]};
        for (Position p : dag_query(e.decoded(), c1, c2, enc.k)) {
            if (p == pa) return true;
            if (p == pb) return false;
        }
        throw std::logic_error("pair comparison found neither candidate");
    };
    AnswerList out;
    size_t total = std::min(kq, width * (r2 - r1 + 1));
    while (out.size() < total) {
        size_t best = cand.size();
        for (size_t i = 0; i < cand.size(); ++i) {
            if (used[i] >= cand[i].size()) continue;
            if (best == cand.size() || beats(i, best)) best = i;
        }
        out.push_back({static_cast<uint32_t>(r1 + best), cand[best][used[best]]});
        ++used[best];
    }
    return out;
}

}  // namespace topk2d
