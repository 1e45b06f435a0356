#include "topk2d/row_topk.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <stdexcept>

#include "topk2d/bitseq.hpp"
#include "topk2d/core.hpp"

namespace topk2d {

uint32_t RowEncoding::kth(size_t i, size_t j, size_t t) const {
    if (t == 0 || t > j - i + 1) return 0;
    return topk_sorted(i, j, t).back();
}

bool RowEncoding::larger(size_t x, size_t y, size_t k) const {
    if (x == y) return false;
    for (uint32_t c : topk_sorted(std::min(x, y), std::max(x, y), k)) {
        if (c == x) return true;
        if (c == y) return false;
    }
    throw std::logic_error("row comparison outside top-k");
}

PermutationRowEncoding::PermutationRowEncoding(std::vector<uint32_t> perm) : perm_(std::move(perm)) {
    std::vector<bool> seen(perm_.size() + 1, false);
    for (uint32_t v : perm_) {
        if (v < 1 || v > perm_.size() || seen[v]) throw std::invalid_argument("not a permutation");
        seen[v] = true;
    }
    build_sparse_table();
}

PermutationRowEncoding PermutationRowEncoding::encode_row(const std::vector<int64_t>& row) {
    std::vector<uint32_t> idx(row.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](uint32_t a, uint32_t b) { return row[a] < row[b]; });
    for (size_t t = 1; t < idx.size(); ++t)
        if (row[idx[t]] == row[idx[t - 1]]) throw std::invalid_argument("row values must be distinct");
    std::vector<uint32_t> perm(row.size());
    for (size_t r = 0; r < idx.size(); ++r) perm[idx[r]] = static_cast<uint32_t>(r + 1);
    return PermutationRowEncoding(std::move(perm));
}

PermutationRowEncoding PermutationRowEncoding::encode_row(const std::vector<uint32_t>& row) {
    return encode_row(std::vector<int64_t>(row.begin(), row.end()));
}

void PermutationRowEncoding::build_sparse_table() {
    size_t n = perm_.size();
    table_.clear();
    if (n == 0) return;
    table_.emplace_back(n);
    std::iota(table_[0].begin(), table_[0].end(), 0);
    for (size_t len = 2; len <= n; len *= 2) {
        const auto& prev = table_.back();
        std::vector<uint32_t> cur(n - len + 1);
        for (size_t i = 0; i + len <= n; ++i) {
            uint32_t a = prev[i], b = prev[i + len / 2];
            cur[i] = perm_[a] > perm_[b] ? a : b;
        }
        table_.push_back(std::move(cur));
    }
}

uint32_t PermutationRowEncoding::argmax(size_t i, size_t j) const {
    size_t lvl = 0;
    while ((size_t{2} << lvl) <= j - i + 1) ++lvl;
    uint32_t a = table_[lvl][i], b = table_[lvl][j + 1 - (size_t{1} << lvl)];
    return perm_[a] > perm_[b] ? a : b;
}

std::vector<uint32_t> PermutationRowEncoding::topk_sorted(size_t i, size_t j, size_t k) const {
    if (i < 1 || i > j || j > perm_.size()) throw std::out_of_range("row range out of bounds");
    std::vector<uint32_t> out;
    using Item = std::pair<uint32_t, std::pair<uint32_t, uint32_t>>;  // value, range
    std::priority_queue<Item> pq;
    auto push = [&](size_t a, size_t b) {
        if (a > b) return;
        uint32_t m = argmax(a, b);
        pq.push({perm_[m], {static_cast<uint32_t>(a), static_cast<uint32_t>(b)}});
    };
    push(i - 1, j - 1);
    while (out.size() < k && !pq.empty()) {
        auto [v, r] = pq.top();
        pq.pop();
        uint32_t m = argmax(r.first, r.second);
        out.push_back(m + 1);
        if (m > r.first) push(r.first, m - 1);
        push(m + 1, r.second);
    }
    return out;
}

uint64_t PermutationRowEncoding::size_bits() const { return uint64_t{perm_.size()} * ceil_lg(perm_.size()); }

void PermutationRowEncoding::serialize(ByteWriter& w) const {
    uint32_t width = ceil_lg(perm_.size());
    BitVector bits;
    for (uint32_t v : perm_) bits.append_bits(v - 1, width);
    w.u64(perm_.size());
    bits.serialize(w);
}

PermutationRowEncoding PermutationRowEncoding::deserialize(ByteReader& r) {
    uint64_t n = r.u64();
    BitVector bits = BitVector::deserialize(r);
    uint32_t width = ceil_lg(n);
    if (bits.size() != n * width) throw format_error("row encoding length mismatch");
    std::vector<uint32_t> perm(n);
    for (size_t t = 0; t < n; ++t) perm[t] = static_cast<uint32_t>(bits.get_bits(t * width, width) + 1);
    return PermutationRowEncoding(std::move(perm));
}

}  // namespace topk2d
