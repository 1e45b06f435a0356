#include "topk2d/fastquery.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace topk2d {

EdgeList CandidateGraph::edges() const {
    EdgeList e;
    for (size_t i = 1; i <= n; ++i)
        if (right[i - 1]) e.push_back({static_cast<uint32_t>(i), right[i - 1]});
    return e;
}

size_t CandidateGraph::edge_count() const {
    return std::count_if(right.begin(), right.end(), [](uint32_t j) { return j != 0; });
}

namespace {

class Fenwick {
public:
    explicit Fenwick(size_t n) : t_(n + 1, 0) {}
    void add(size_t i) {
        for (; i < t_.size(); i += i & -i) ++t_[i];
    }
    size_t prefix(size_t i) const {
        size_t s = 0;
        for (; i > 0; i -= i & -i) s += t_[i];
        return s;
    }

private:
    std::vector<size_t> t_;
};

// edge from i to the j > i with the smallest A[to][j] among those with A[from][i] < A[to][j]
// and at most k-1 cells of columns i..j above both
CandidateGraph build_graph(const Grid2D& g, size_t k, int from, int to, Orientation o) {
    if (g.m() != 2) throw shape_error("candidate graphs need a 2 x n grid");
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    size_t n = g.n(), cells = 2 * n;
    CandidateGraph cg;
    cg.orientation = o;
    cg.n = n;
    cg.k = k;
    cg.right.assign(n, 0);
    for (size_t i = 1; i <= n; ++i) {
        Fenwick fw(cells);
        uint32_t base = g.at(from, i);
        fw.add(g.at(1, i));
        fw.add(g.at(2, i));
        uint32_t best = 0, best_val = 0;
        for (size_t j = i + 1; j <= n; ++j) {
            fw.add(g.at(1, j));
            fw.add(g.at(2, j));
            uint32_t v = g.at(to, j);
            if (v < base) continue;
            size_t above = (j - i + 1) * 2 - fw.prefix(v);
            if (above > k - 1) continue;
            if (!best || v < best_val) {
                best = static_cast<uint32_t>(j);
                best_val = v;
            }
        }
        cg.right[i - 1] = best;
    }
    return cg;
}

}  // namespace

CandidateGraph build_g12(const Grid2D& g, size_t k) { return build_graph(g, k, 1, 2, Orientation::o12); }
CandidateGraph build_g21(const Grid2D& g, size_t k) { return build_graph(g, k, 2, 1, Orientation::o21); }

KPageResult verify_kpage(const EdgeList& edges, size_t k) {
    KPageResult res;
    uint32_t hi = 0;
    for (auto [i, j] : edges) {
        if (i >= j) throw std::invalid_argument("edges need i < j");
        hi = std::max(hi, j);
    }
    // a crossing family i_1<..<i_t<j_1<..<j_t has every edge spanning x = i_t;
    // among edges spanning x, the largest family is the longest chain increasing in both ends
    for (uint32_t x = 1; x < hi; ++x) {
        EdgeList span;
        for (auto e : edges)
            if (e.first <= x && x < e.second) span.push_back(e);
        if (span.size() <= k) continue;
        std::sort(span.begin(), span.end(), [](auto& a, auto& b) {
            return a.first != b.first ? a.first < b.first : a.second > b.second;
        });
        std::vector<size_t> tails, prev(span.size(), SIZE_MAX), tail_idx;
        for (size_t t = 0; t < span.size(); ++t) {
            auto it = std::lower_bound(tails.begin(), tails.end(), span[t].second,
                                       [](size_t a, uint32_t b) { return a < b; });
            size_t pos = it - tails.begin();
            if (pos > 0) prev[t] = tail_idx[pos - 1];
            if (pos == tails.size()) {
                tails.push_back(span[t].second);
                tail_idx.push_back(t);
            } else {
                tails[pos] = span[t].second;
                tail_idx[pos] = t;
            }
        }
        if (tails.size() > k) {
            res.pass = false;
            for (size_t t = tail_idx.back(); t != SIZE_MAX; t = prev[t]) res.witness.push_back(span[t]);
            std::reverse(res.witness.begin(), res.witness.end());
            res.witness.resize(k + 1);
            return res;
        }
    }
    return res;
}

KPageResult verify_kpage(const CandidateGraph& g, size_t k) { return verify_kpage(g.edges(), k); }

std::vector<uint32_t> assign_pages(const EdgeList& edges) {
    auto cross = [](std::pair<uint32_t, uint32_t> a, std::pair<uint32_t, uint32_t> b) {
        if (a.first > b.first) std::swap(a, b);
        return a.first < b.first && b.first < a.second && a.second < b.second;
    };
    std::vector<EdgeList> pages;
    std::vector<uint32_t> out;
    for (auto e : edges) {
        size_t p = 0;
        while (p < pages.size() &&
               std::any_of(pages[p].begin(), pages[p].end(), [&](auto f) { return cross(e, f); }))
            ++p;
        if (p == pages.size()) pages.emplace_back();
        pages[p].push_back(e);
        out.push_back(static_cast<uint32_t>(p));
    }
    return out;
}

// ------------------------------------------------------------------ structure

FastQueryStructure build_fast(const Grid2D& g, size_t k) {
    if (g.m() != 2) throw shape_error("fast query structure needs a 2 x n grid");
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    FastQueryStructure fs;
    fs.n = g.n();
    fs.k = k;
    fs.row1 = std::make_shared<const PermutationRowEncoding>(PermutationRowEncoding::encode_row(g.row(1)));
    fs.row2 = std::make_shared<const PermutationRowEncoding>(PermutationRowEncoding::encode_row(g.row(2)));
    fs.g12 = build_g12(g, k);
    fs.g21 = build_g21(g, k);
    size_t n = fs.n;
    for (size_t i = 1; i <= n; ++i) fs.P.push_back(!(g.at(1, i) > g.at(2, i)));
    // suffix maxima of each row
    std::vector<uint32_t> suf1(n + 2, 0), suf2(n + 2, 0);
    for (size_t i = n; i >= 1; --i) {
        suf1[i] = std::max(suf1[i + 1], g.at(1, i));
        suf2[i] = std::max(suf2[i + 1], g.at(2, i));
    }
    for (size_t i = 1; i + 1 <= n; ++i) {
        fs.Q12.push_back(suf2[i + 1] < g.at(1, i));
        fs.Q21.push_back(suf1[i + 1] < g.at(2, i));
    }
    return fs;
}

FastQueryStructure::Space FastQueryStructure::space() const {
    Space s;
    s.row_bits = row1->size_bits() + row2->size_bits();
    s.graph_bits = 2 * n * ceil_lg(n + 1);
    s.graph_budget_bits = (4 * k + 4) * n;
    s.pq_bits = P.size() + Q12.size() + Q21.size();
    s.extra_budget_bits = (4 * k + 7) * n;
    return s;
}

void FastQueryStructure::serialize_extra(ByteWriter& w) const {
    uint32_t width = ceil_lg(n + 1);
    BitVector nb;
    for (uint32_t j : g12.right) nb.append_bits(j, width);
    for (uint32_t j : g21.right) nb.append_bits(j, width);
    nb.serialize(w);
    P.serialize(w);
    Q12.serialize(w);
    Q21.serialize(w);
}

FastQueryStructure FastQueryStructure::deserialize_extra(ByteReader& r, size_t n, size_t k, RowPtr row1,
                                                         RowPtr row2) {
    FastQueryStructure fs;
    fs.n = n;
    fs.k = k;
    fs.row1 = std::move(row1);
    fs.row2 = std::move(row2);
    uint32_t width = ceil_lg(n + 1);
    BitVector nb = BitVector::deserialize(r);
    if (nb.size() != 2 * n * width) throw format_error("neighbor array has the wrong length");
    fs.g12 = {Orientation::o12, n, k, std::vector<uint32_t>(n)};
    fs.g21 = {Orientation::o21, n, k, std::vector<uint32_t>(n)};
    for (size_t i = 0; i < n; ++i) {
        fs.g12.right[i] = static_cast<uint32_t>(nb.get_bits(i * width, width));
        fs.g21.right[i] = static_cast<uint32_t>(nb.get_bits((n + i) * width, width));
        for (uint32_t j : {fs.g12.right[i], fs.g21.right[i]})
            if (j != 0 && (j <= i + 1 || j > n)) throw format_error("neighbor out of range");
    }
    fs.P = BitVector::deserialize(r);
    fs.Q12 = BitVector::deserialize(r);
    fs.Q21 = BitVector::deserialize(r);
    size_t q = n > 0 ? n - 1 : 0;
    if (fs.P.size() != n || fs.Q12.size() != q || fs.Q21.size() != q)
        throw format_error("P or Q has the wrong length");
    return fs;
}

// ----------------------------------------------------------------- querying

namespace {

// true when the x-row candidate at column a beats the other row's candidate at column b, a < b
bool beats_right(const CandidateGraph& g, const RowEncoding& other, size_t a, size_t b, size_t k) {
    uint32_t a2 = g.neighbor(a);
    if (a2 == 0) return true;
    if (a2 == b) return false;
    return other.larger(a2, b, k);
}

}  // namespace

bool compare_candidates(const FastQueryStructure& fs, size_t p, size_t q, size_t c1, size_t c2) {
    if (p < 1 || q < 1 || p + q > fs.k + 1) throw std::invalid_argument("compare_candidates needs p + q <= k + 1");
    if (c1 < 1 || c1 > c2 || c2 > fs.n) throw std::out_of_range("column range out of bounds");
    size_t a = fs.row1->kth(c1, c2, p), b = fs.row2->kth(c1, c2, q);
    if (!a || !b) throw std::out_of_range("candidate ordinal exceeds the range");
    if (a == b) return fs.P.get(a - 1) == 0;
    if (a < b) return beats_right(fs.g12, *fs.row2, a, b, fs.k);
    return !beats_right(fs.g21, *fs.row1, b, a, fs.k);
}

AnswerList query_fast(const FastQueryStructure& fs, size_t c1, size_t c2, size_t kq, FastQueryStats* stats) {
    if (c1 < 1 || c1 > c2 || c2 > fs.n) throw std::out_of_range("column range out of bounds");
    if (kq < 1 || kq > fs.k) throw std::out_of_range("k' must be in 1..k");
    auto r1 = fs.row1->topk_sorted(c1, c2, kq), r2 = fs.row2->topk_sorted(c1, c2, kq);
    size_t total = std::min(kq, 2 * (c2 - c1 + 1));
    AnswerList out;
    size_t p = 0, q = 0;
    while (out.size() < total) {
        bool take1;
        if (p == r1.size())
            take1 = false;
        else if (q == r2.size())
            take1 = true;
        else {
            take1 = compare_candidates(fs, p + 1, q + 1, c1, c2);
            if (stats) ++stats->comparisons;
        }
        if (take1)
            out.push_back({1, r1[p++]});
        else
            out.push_back({2, r2[q++]});
    }
    return out;
}

std::string graphs_to_dot(const FastQueryStructure& fs) {
    static const char* colors[] = {"black", "red", "blue", "darkgreen", "orange", "purple", "brown", "cyan"};
    std::ostringstream o;
    o << "digraph candidates {\n  rankdir=LR;\n";
    for (const CandidateGraph* g : {&fs.g12, &fs.g21}) {
        std::string tag = g->orientation == Orientation::o12 ? "g12" : "g21";
        o << "  subgraph cluster_" << tag << " {\n    label=\"" << tag << "\";\n";
        for (size_t v = 1; v <= g->n; ++v) o << "    " << tag << "_" << v << " [label=\"" << v << "\"];\n";
        EdgeList e = g->edges();
        auto pages = assign_pages(e);
        for (size_t t = 0; t < e.size(); ++t)
            o << "    " << tag << "_" << e[t].first << " -> " << tag << "_" << e[t].second << " [color="
              << colors[pages[t] % 8] << ",label=\"p" << pages[t] << "\"];\n";
        o << "  }\n";
    }
    o << "}\n";
    return o.str();
}

}  // namespace topk2d
