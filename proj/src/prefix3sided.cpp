#include "topk2d/prefix3sided.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <set>
#include <stdexcept>

namespace topk2d {

namespace {

void check_pair_grid(const Grid2D& g, size_t k) {
    if (g.m() != 2) throw shape_error("prefix encodings need a 2 x n grid");
    if (k <= 1) throw std::invalid_argument("prefix encodings need k > 1");
    if (k > 2 * g.n()) throw std::invalid_argument("prefix encodings need k <= 2n");
}

void check_prefix(size_t n, size_t i) {
    if (i < 1 || i > n) throw std::out_of_range("prefix index out of range");
}

// f_i for every prefix, by a min-heap pass over the columns
std::vector<size_t> all_prefix_f(const Grid2D& g, size_t k) {
    using Item = std::pair<uint32_t, int>;  // value, row
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    std::vector<size_t> f(g.n() + 1, 0);
    size_t ones = 0;
    for (size_t i = 1; i <= g.n(); ++i) {
        for (int r = 1; r <= 2; ++r) {
            heap.push({g.at(r, i), r});
            ones += (r == 1);
        }
        while (heap.size() > k) {
            ones -= (heap.top().second == 1);
            heap.pop();
        }
        f[i] = ones;
    }
    return f;
}

AnswerList all_cells(size_t i) {
    AnswerList a;
    for (uint32_t r = 1; r <= 2; ++r)
        for (uint32_t c = 1; c <= i; ++c) a.push_back({r, c});
    return a;
}

AnswerList as_row(uint32_t r, const std::vector<uint32_t>& cols) {
    AnswerList a;
    for (uint32_t c : cols) a.push_back({r, c});
    return a;
}

}  // namespace

PrefixCounts prefix_counts(const Grid2D& g, size_t k, size_t i) {
    PrefixCounts pc;
    for (Position p : oracle_topk(g, 1, 2, 1, i, k)) (p.row == 1 ? pc.f : pc.s)++;
    return pc;
}

// ------------------------------------------------------------------ unsorted

UnsortedPrefixEncoding build_unsorted(const Grid2D& g, size_t k) {
    check_pair_grid(g, k);
    UnsortedPrefixEncoding e;
    e.n = g.n();
    e.k = k;
    e.row1 = PermutationRowEncoding::encode_row(g.row(1));
    e.row2 = PermutationRowEncoding::encode_row(g.row(2));
    auto f = all_prefix_f(g, k);
    size_t h = k / 2;
    for (size_t i = h + 1; i <= e.n; ++i) {
        long d = long(f[i]) - long(i - 1 == h ? h : f[i - 1]);
        if (d < -1 || d > 1) throw std::logic_error("prefix f changed by more than one");
        e.B.push_back(d == 1 ? 1 : d == 0 ? 2 : 3);
    }
    e.B.build_index();
    return e;
}

PrefixCounts UnsortedPrefixEncoding::counts(size_t i) const {
    check_prefix(n, i);
    size_t h = k / 2;
    if (i <= h) return {i, i};
    size_t t = i - h;
    size_t f = h + B.rank(1, t) - B.rank(3, t);
    return {f, k - f};
}

AnswerList query_unsorted_prefix(const UnsortedPrefixEncoding& enc, size_t i) {
    PrefixCounts pc = enc.counts(i);
    if (i <= enc.k / 2) return all_cells(i);
    AnswerList a = as_row(1, enc.row1.topk_sorted(1, i, pc.f));
    AnswerList b = as_row(2, enc.row2.topk_sorted(1, i, pc.s));
    a.insert(a.end(), b.begin(), b.end());
    std::sort(a.begin(), a.end());
    return a;
}

void UnsortedPrefixEncoding::serialize(ByteWriter& w) const {
    row1.serialize(w);
    row2.serialize(w);
    B.serialize(w);
}

UnsortedPrefixEncoding UnsortedPrefixEncoding::deserialize(ByteReader& r, size_t n, size_t k) {
    UnsortedPrefixEncoding e;
    e.n = n;
    e.k = k;
    e.row1 = PermutationRowEncoding::deserialize(r);
    e.row2 = PermutationRowEncoding::deserialize(r);
    e.B = TernarySequence::deserialize(r);
    if (e.row1.size() != n || e.row2.size() != n || e.B.size() != (n > k / 2 ? n - k / 2 : 0))
        throw format_error("unsorted prefix encoding shape mismatch");
    return e;
}

// ------------------------------------------------------------- sorted, k*n

uint64_t SortedPrefixBitvectors::offset(size_t k, size_t i) {
    // sum over t < i of min(k, 2t)
    uint64_t full = std::min<uint64_t>(i - 1, k / 2);  // t with 2t <= k
    uint64_t off = full * (full + 1);
    if (i - 1 > full) off += uint64_t{k} * (i - 1 - full);
    return off;
}

SortedPrefixBitvectors build_sorted_kn(const Grid2D& g, size_t k) {
    check_pair_grid(g, k);
    SortedPrefixBitvectors e;
    e.n = g.n();
    e.k = k;
    e.row1 = PermutationRowEncoding::encode_row(g.row(1));
    e.row2 = PermutationRowEncoding::encode_row(g.row(2));
    // running sorted top-k of the prefix
    std::vector<std::pair<uint32_t, int>> top;
    for (size_t i = 1; i <= e.n; ++i) {
        for (int r = 1; r <= 2; ++r) top.push_back({g.at(r, i), r});
        std::sort(top.begin(), top.end(), std::greater<>());
        if (top.size() > k) top.resize(k);
        for (auto& [v, r] : top) e.bits.push_back(r == 2);
    }
    e.bits.build_index();
    return e;
}

BitVector SortedPrefixBitvectors::prefix_bits(size_t i) const {
    check_prefix(n, i);
    BitVector b;
    uint64_t off = offset(k, i), len = std::min<uint64_t>(k, 2 * i);
    for (uint64_t t = 0; t < len; ++t) b.push_back(bits.get(off + t));
    return b;
}

AnswerList query_sorted_kn(const SortedPrefixBitvectors& enc, size_t i) {
    check_prefix(enc.n, i);
    uint64_t off = SortedPrefixBitvectors::offset(enc.k, i), len = std::min<uint64_t>(enc.k, 2 * i);
    size_t ones = enc.bits.rank1(off + len) - enc.bits.rank1(off);
    auto r1 = enc.row1.topk_sorted(1, i, len - ones);
    auto r2 = enc.row2.topk_sorted(1, i, ones);
    AnswerList out;
    size_t a = 0, b = 0;
    for (uint64_t t = 0; t < len; ++t) {
        if (enc.bits.get(off + t))
            out.push_back({2, r2[b++]});
        else
            out.push_back({1, r1[a++]});
    }
    return out;
}

void SortedPrefixBitvectors::serialize(ByteWriter& w) const {
    row1.serialize(w);
    row2.serialize(w);
    bits.serialize(w);
}

SortedPrefixBitvectors SortedPrefixBitvectors::deserialize(ByteReader& r, size_t n, size_t k) {
    SortedPrefixBitvectors e;
    e.n = n;
    e.k = k;
    e.row1 = PermutationRowEncoding::deserialize(r);
    e.row2 = PermutationRowEncoding::deserialize(r);
    e.bits = BitVector::deserialize(r);
    if (e.row1.size() != n || e.row2.size() != n || e.bits.size() != offset(k, n + 1))
        throw format_error("sorted prefix bit vectors shape mismatch");
    return e;
}

// ---------------------------------------------------------- sorted, ternary

SortedPrefixTernary build_sorted_ternary(const Grid2D& g, size_t k) {
    check_pair_grid(g, k);
    SortedPrefixTernary e;
    e.n = g.n();
    e.k = k;
    e.row1 = PermutationRowEncoding::encode_row(g.row(1));
    e.row2 = PermutationRowEncoding::encode_row(g.row(2));
    size_t kk = e.k_even(), h = kk / 2, n = e.n;
    std::set<std::pair<uint32_t, int>> pool;  // value, row
    for (size_t c = 1; c <= h; ++c)
        for (int r = 1; r <= 2; ++r) pool.insert({g.at(r, c), r});
    size_t real = 2 * (n - h);
    for (size_t j = 1; j <= 2 * n; ++j) {
        int row = j % 2 ? 1 : 2;
        uint32_t v = j <= real ? g.at(row, h + (j + 1) / 2) : uint32_t(2 * n + (j - real));
        uint8_t sym = 1;
        if (v > pool.begin()->first) {
            sym = pool.begin()->second == 1 ? 2 : 3;
            pool.erase(pool.begin());
            pool.insert({v, row});
        }
        (j % 2 ? e.Ao : e.Ae).push_back(sym);
    }
    e.Ao.build_index();
    e.Ae.build_index();
    return e;
}

PrefixCounts SortedPrefixTernary::counts(size_t i) const {
    check_prefix(n, i);
    size_t kk = k_even(), h = kk / 2;
    if (i <= h) return {i, i};
    size_t t = i - h;
    size_t f = h + Ao.rank(3, t) - Ae.rank(2, t);
    return {f, kk - f};
}

AnswerList query_sorted_ternary(const SortedPrefixTernary& enc, size_t i) {
    size_t kk = enc.k_even(), h = kk / 2, n = enc.n;
    check_prefix(n, i);
    size_t bound = std::max(i, h);
    PrefixCounts pc = enc.counts(bound);
    size_t f = pc.f, s = pc.s;
    size_t real = 2 * (n - h);
    AnswerList displaced;
    for (size_t j = 2 * (bound - h) + 1; j <= 2 * n; ++j) {
        bool odd = j % 2;
        bool sentinel = j > real;
        size_t c = sentinel ? n + 1 : h + (j + 1) / 2;
        uint8_t sym = odd ? enc.Ao.at((j + 1) / 2) : enc.Ae.at(j / 2);
        if (sym == 1) continue;
        if (sym == 2) {
            size_t upto = std::min(n, odd ? c - 1 : c);
            uint32_t col = enc.row1.kth(1, upto, f);
            if (col == 0) throw std::logic_error("inconsistent ternary events");
            if (col <= bound) displaced.push_back({1, col});
            --f;
        } else {
            size_t upto = std::min(n, c - 1);
            uint32_t col = enc.row2.kth(1, upto, s);
            if (col == 0) throw std::logic_error("inconsistent ternary events");
            if (col <= bound) displaced.push_back({2, col});
            --s;
        }
        if (!sentinel) ++(odd ? f : s);
    }
    std::reverse(displaced.begin(), displaced.end());
    AnswerList out;
    for (Position p : displaced)
        if (p.col <= i) out.push_back(p);
    if (out.size() > std::min(enc.k, 2 * i)) out.resize(std::min(enc.k, 2 * i));
    return out;
}

void SortedPrefixTernary::serialize(ByteWriter& w) const {
    row1.serialize(w);
    row2.serialize(w);
    Ao.serialize(w);
    Ae.serialize(w);
}

SortedPrefixTernary SortedPrefixTernary::deserialize(ByteReader& r, size_t n, size_t k) {
    SortedPrefixTernary e;
    e.n = n;
    e.k = k;
    e.row1 = PermutationRowEncoding::deserialize(r);
    e.row2 = PermutationRowEncoding::deserialize(r);
    e.Ao = TernarySequence::deserialize(r);
    e.Ae = TernarySequence::deserialize(r);
    if (e.row1.size() != n || e.row2.size() != n || e.Ao.size() != n || e.Ae.size() != n)
        throw format_error("sorted prefix ternary shape mismatch");
    return e;
}

}  // namespace topk2d
