#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "topk2d/io.hpp"

namespace topk2d {

struct not_found : std::out_of_range {
    using std::out_of_range::out_of_range;
};

struct SpaceReport {
    uint64_t payload_bits = 0;
    uint64_t index_bits = 0;
    uint64_t entropy_bound_bits = 0;
    uint64_t dense_payload_bits = 0;  // base-3 packing, 5 symbols per byte
};

// smallest b with 2^b >= 3^n
uint64_t ternary_entropy_bits(uint64_t n);

// Plain bit vector. get() is 0-based; rank1(i) counts ones among the first i bits;
// select1(j) returns the prefix length ending at the j-th one.
// Rank samples every ceil(lg n) words, so the index is n/ceil(lg n) bits.
class BitVector {
public:
    BitVector() = default;
    explicit BitVector(size_t n, bool value = false);

    size_t size() const { return n_; }
    bool empty() const { return n_ == 0; }
    bool get(size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }
    bool operator[](size_t i) const { return get(i); }
    void set(size_t i, bool v);
    void push_back(bool v);
    void append_bits(uint64_t value, uint32_t width);  // least significant bit first
    uint64_t get_bits(size_t pos, uint32_t width) const;

    void build_index();
    size_t rank1(size_t i) const;
    size_t rank0(size_t i) const { return i - rank1(i); }
    size_t select1(size_t j) const;
    size_t select0(size_t j) const;
    size_t count_ones() const { return rank1(n_); }

    uint64_t index_bits() const { return samples_.size() * 64; }
    SpaceReport space_report() const;

    void serialize(ByteWriter& w) const;
    static BitVector deserialize(ByteReader& r);
    std::vector<uint8_t> to_bytes() const;
    static BitVector from_bytes(const std::vector<uint8_t>& b);

    bool operator==(const BitVector& o) const { return n_ == o.n_ && words_ == o.words_; }

private:
    size_t stride_words() const;
    size_t n_ = 0;
    std::vector<uint64_t> words_;
    std::vector<uint64_t> samples_;
    bool indexed_ = false;
};

// Sequence over {1,2,3}, 2 bits per symbol, with rank/select. Positions are 1-based.
class TernarySequence {
public:
    TernarySequence() = default;
    explicit TernarySequence(const std::vector<uint8_t>& symbols);

    size_t size() const { return n_; }
    uint8_t at(size_t i) const;  // 1-based
    void push_back(uint8_t x);
    void build_index();

    size_t rank(uint8_t x, size_t i) const;
    size_t select(uint8_t x, size_t j) const;

    SpaceReport space_report() const;
    std::vector<uint8_t> symbols() const;

    enum class Packing : uint8_t { two_bit = 1, base3 = 2 };
    void serialize(ByteWriter& w, Packing p = Packing::base3) const;
    static TernarySequence deserialize(ByteReader& r);
    std::vector<uint8_t> to_bytes(Packing p = Packing::base3) const;
    static TernarySequence from_bytes(const std::vector<uint8_t>& b);

    bool operator==(const TernarySequence& o) const { return n_ == o.n_ && words_ == o.words_; }

private:
    size_t stride_words() const;
    size_t count_in_word(size_t w, uint8_t x, size_t upto) const;
    size_t n_ = 0;
    std::vector<uint64_t> words_;   // 32 symbols per word
    std::vector<uint64_t> samples_; // 3 cumulative counts per superblock
    bool indexed_ = false;
};

}  // namespace topk2d
