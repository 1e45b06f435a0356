#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "topk2d/bitseq.hpp"
#include "topk2d/core.hpp"
#include "topk2d/pair4sided.hpp"

namespace topk2d {

enum class Orientation : uint8_t { o12 = 12, o21 = 21 };

// Edges (i, j), i < j; at most one right neighbor per vertex.
class CandidateGraph {
public:
    Orientation orientation = Orientation::o12;
    size_t n = 0, k = 0;
    std::vector<uint32_t> right;  // right[i-1] = j, or 0 without an edge

    std::vector<std::pair<uint32_t, uint32_t>> edges() const;
    size_t edge_count() const;
    uint32_t neighbor(size_t v) const { return right[v - 1]; }
};

using EdgeList = std::vector<std::pair<uint32_t, uint32_t>>;

struct KPageResult {
    bool pass = true;
    EdgeList witness;  // k+1 pairwise crossing edges when failing
};

CandidateGraph build_g12(const Grid2D& g, size_t k);
CandidateGraph build_g21(const Grid2D& g, size_t k);
KPageResult verify_kpage(const EdgeList& edges, size_t k);
KPageResult verify_kpage(const CandidateGraph& g, size_t k);
// greedy page per edge, in order of edges(); no two edges on a page cross
std::vector<uint32_t> assign_pages(const EdgeList& edges);

class FastQueryStructure {
public:
    size_t n = 0, k = 0;
    RowPtr row1, row2;
    CandidateGraph g12, g21;
    BitVector P, Q12, Q21;

    struct Space {
        uint64_t row_bits = 0;
        uint64_t graph_bits = 0;         // right-neighbor arrays as stored
        uint64_t graph_budget_bits = 0;  // (4k+4)n
        uint64_t pq_bits = 0;            // P, Q12, Q21
        uint64_t extra_bits() const { return graph_bits + pq_bits; }
        uint64_t extra_budget_bits = 0;  // (4k+7)n
    };
    Space space() const;

    void serialize_extra(ByteWriter& w) const;
    static FastQueryStructure deserialize_extra(ByteReader& r, size_t n, size_t k, RowPtr row1, RowPtr row2);
};

FastQueryStructure build_fast(const Grid2D& g, size_t k);

// true when A[1][a_p] > A[2][b_q]; needs p + q <= k + 1
bool compare_candidates(const FastQueryStructure& fs, size_t p, size_t q, size_t c1, size_t c2);

struct FastQueryStats {
    size_t comparisons = 0;
};

AnswerList query_fast(const FastQueryStructure& fs, size_t c1, size_t c2, size_t kq, FastQueryStats* stats = nullptr);

std::string graphs_to_dot(const FastQueryStructure& fs);

}  // namespace topk2d
