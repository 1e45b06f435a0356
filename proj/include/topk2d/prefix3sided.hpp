#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "topk2d/bitseq.hpp"
#include "topk2d/core.hpp"
#include "topk2d/row_topk.hpp"

namespace topk2d {

struct PrefixCounts {
    size_t f = 0;  // answers from row 1
    size_t s = 0;  // answers from row 2
};

// f_i of the top-k of columns 1..i, by brute force
PrefixCounts prefix_counts(const Grid2D& g, size_t k, size_t i);

// Unsorted prefix top-k: ternary sequence of f deltas over columns floor(k/2)+1..n.
class UnsortedPrefixEncoding {
public:
    size_t n = 0, k = 0;
    PermutationRowEncoding row1, row2;
    TernarySequence B;

    PrefixCounts counts(size_t i) const;
    uint64_t payload_symbols() const { return B.size(); }
    void serialize(ByteWriter& w) const;
    static UnsortedPrefixEncoding deserialize(ByteReader& r, size_t n, size_t k);
};

UnsortedPrefixEncoding build_unsorted(const Grid2D& g, size_t k);
AnswerList query_unsorted_prefix(const UnsortedPrefixEncoding& enc, size_t i);

// Sorted prefix top-k: one bit vector of length min(k,2i) per prefix, concatenated.
class SortedPrefixBitvectors {
public:
    size_t n = 0, k = 0;
    PermutationRowEncoding row1, row2;
    BitVector bits;

    static uint64_t offset(size_t k, size_t i);  // start of B_i
    BitVector prefix_bits(size_t i) const;
    uint64_t payload_bits() const { return bits.size(); }
    void serialize(ByteWriter& w) const;
    static SortedPrefixBitvectors deserialize(ByteReader& r, size_t n, size_t k);
};

SortedPrefixBitvectors build_sorted_kn(const Grid2D& g, size_t k);
AnswerList query_sorted_kn(const SortedPrefixBitvectors& enc, size_t i);

// Sorted prefix top-k from two ternary event sequences (odd / even entrants).
// Odd k is stored with k+1 and answers are truncated.
class SortedPrefixTernary {
public:
    size_t n = 0, k = 0;
    PermutationRowEncoding row1, row2;
    TernarySequence Ao, Ae;

    size_t k_even() const { return k % 2 ? k + 1 : k; }
    PrefixCounts counts(size_t i) const;  // for k_even()
    uint64_t payload_symbols() const { return Ao.size() + Ae.size(); }
    void serialize(ByteWriter& w) const;
    static SortedPrefixTernary deserialize(ByteReader& r, size_t n, size_t k);
};

SortedPrefixTernary build_sorted_ternary(const Grid2D& g, size_t k);
AnswerList query_sorted_ternary(const SortedPrefixTernary& enc, size_t i);

}  // namespace topk2d
