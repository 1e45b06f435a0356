#include "topk2d/bitseq.hpp"

#include <bit>
#include <cmath>

#include "topk2d/core.hpp"

namespace topk2d {

namespace {

constexpr char kMagic[5] = "TKB1";
constexpr uint32_t kVersion = 1;
constexpr uint8_t kModeBits = 0;
constexpr uint64_t kPairs = 0x5555555555555555ULL;

void write_header(ByteWriter& w, uint64_t len, uint8_t mode) {
    w.magic(kMagic);
    w.u32(kVersion);
    w.u64(len);
    w.u8(mode);
}

}  // namespace

uint64_t ternary_entropy_bits(uint64_t n) {
    if (n == 0) return 0;
    long double x = static_cast<long double>(n) * std::log2(3.0L);
    return static_cast<uint64_t>(std::ceil(x));
}

// ---------------------------------------------------------------- BitVector

BitVector::BitVector(size_t n, bool value) : n_(n), words_((n + 63) / 64, value ? ~uint64_t{0} : 0) {
    if (value && (n & 63)) words_.back() &= (uint64_t{1} << (n & 63)) - 1;
}

void BitVector::set(size_t i, bool v) {
    if (v)
        words_[i >> 6] |= uint64_t{1} << (i & 63);
    else
        words_[i >> 6] &= ~(uint64_t{1} << (i & 63));
    indexed_ = false;
}

void BitVector::push_back(bool v) {
    if ((n_ & 63) == 0) words_.push_back(0);
    ++n_;
    set(n_ - 1, v);
}

void BitVector::append_bits(uint64_t value, uint32_t width) {
    for (uint32_t b = 0; b < width; ++b) push_back((value >> b) & 1);
}

uint64_t BitVector::get_bits(size_t pos, uint32_t width) const {
    uint64_t v = 0;
    for (uint32_t b = 0; b < width; ++b) v |= uint64_t{get(pos + b)} << b;
    return v;
}

size_t BitVector::stride_words() const { return std::max<size_t>(1, ceil_lg(n_)); }

void BitVector::build_index() {
    samples_.clear();
    size_t stride = stride_words();
    uint64_t acc = 0;
    for (size_t w = 0; w < words_.size(); ++w) {
        if (w % stride == 0) samples_.push_back(acc);
        acc += std::popcount(words_[w]);
    }
    indexed_ = true;
}

size_t BitVector::rank1(size_t i) const {
    if (i > n_) throw std::out_of_range("rank beyond length");
    size_t full = i >> 6, acc = 0, w = 0;
    if (indexed_ && !samples_.empty()) {
        size_t s = std::min(full / stride_words(), samples_.size() - 1);
        acc = samples_[s];
        w = s * stride_words();
    }
    for (; w < full; ++w) acc += std::popcount(words_[w]);
    if (i & 63) acc += std::popcount(words_[full] & ((uint64_t{1} << (i & 63)) - 1));
    return acc;
}

size_t BitVector::select1(size_t j) const {
    if (j == 0) return 0;
    if (j > count_ones()) throw not_found("select beyond occurrences");
    size_t lo = 0, hi = n_;  // smallest i with rank1(i) >= j
    while (lo < hi) {
        size_t mid = (lo + hi) / 2;
        if (rank1(mid) >= j)
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo;
}

size_t BitVector::select0(size_t j) const {
    if (j == 0) return 0;
    if (j > n_ - count_ones()) throw not_found("select beyond occurrences");
    size_t lo = 0, hi = n_;
    while (lo < hi) {
        size_t mid = (lo + hi) / 2;
        if (rank0(mid) >= j)
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo;
}

SpaceReport BitVector::space_report() const {
    SpaceReport r;
    r.payload_bits = n_;
    r.index_bits = indexed_ ? index_bits() : 0;
    r.entropy_bound_bits = n_;
    r.dense_payload_bits = n_;
    return r;
}

void BitVector::serialize(ByteWriter& w) const {
    write_header(w, n_, kModeBits);
    std::vector<uint8_t> bytes((n_ + 7) / 8, 0);
    for (size_t i = 0; i < n_; ++i)
        if (get(i)) bytes[i / 8] |= uint8_t(0x80 >> (i % 8));
    w.raw(bytes.data(), bytes.size());
}

BitVector BitVector::deserialize(ByteReader& r) {
    r.expect_magic(kMagic);
    if (r.u32() != kVersion) throw format_error("unsupported TKB1 version");
    uint64_t n = r.u64();
    if (r.u8() != kModeBits) throw format_error("TKB1 payload is not a bit vector");
    if (n > r.remaining() * 8) throw format_error("truncated bit vector");
    const uint8_t* b = r.take((n + 7) / 8);
    BitVector v(n);
    for (size_t i = 0; i < n; ++i)
        if (b[i / 8] & (0x80 >> (i % 8))) v.set(i, true);
    v.build_index();
    return v;
}

std::vector<uint8_t> BitVector::to_bytes() const {
    ByteWriter w;
    serialize(w);
    return w.bytes();
}

BitVector BitVector::from_bytes(const std::vector<uint8_t>& b) {
    ByteReader r(b);
    return deserialize(r);
}

// ---------------------------------------------------------- TernarySequence

TernarySequence::TernarySequence(const std::vector<uint8_t>& symbols) {
    for (uint8_t x : symbols) push_back(x);
    build_index();
}

uint8_t TernarySequence::at(size_t i) const {
    if (i < 1 || i > n_) throw std::out_of_range("ternary index out of range");
    --i;
    return (words_[i >> 5] >> (2 * (i & 31))) & 3;
}

void TernarySequence::push_back(uint8_t x) {
    if (x < 1 || x > 3) throw std::invalid_argument("ternary symbol must be 1, 2 or 3");
    if ((n_ & 31) == 0) words_.push_back(0);
    words_[n_ >> 5] |= uint64_t{x} << (2 * (n_ & 31));
    ++n_;
    indexed_ = false;
}

size_t TernarySequence::stride_words() const { return std::max<size_t>(1, ceil_lg(n_)); }

size_t TernarySequence::count_in_word(size_t w, uint8_t x, size_t upto) const {
    uint64_t d = words_[w] ^ (kPairs * x);
    uint64_t m = ~(d | (d >> 1)) & kPairs;
    if (upto < 32) m &= (uint64_t{1} << (2 * upto)) - 1;
    return std::popcount(m);
}

void TernarySequence::build_index() {
    samples_.clear();
    size_t stride = stride_words();
    uint64_t acc[3] = {0, 0, 0};
    for (size_t w = 0; w < words_.size(); ++w) {
        if (w % stride == 0)
            for (int x = 0; x < 3; ++x) samples_.push_back(acc[x]);
        size_t upto = std::min<size_t>(32, n_ - w * 32);
        for (int x = 0; x < 3; ++x) acc[x] += count_in_word(w, uint8_t(x + 1), upto);
    }
    indexed_ = true;
}

size_t TernarySequence::rank(uint8_t x, size_t i) const {
    if (x < 1 || x > 3) throw std::invalid_argument("ternary symbol must be 1, 2 or 3");
    if (i > n_) throw std::out_of_range("rank beyond length");
    size_t full = i >> 5, acc = 0, w = 0;
    if (indexed_ && !samples_.empty()) {
        size_t s = std::min(full / stride_words(), samples_.size() / 3 - 1);
        acc = samples_[3 * s + (x - 1)];
        w = s * stride_words();
    }
    for (; w < full; ++w) acc += count_in_word(w, x, 32);
    if (i & 31) acc += count_in_word(full, x, i & 31);
    return acc;
}

size_t TernarySequence::select(uint8_t x, size_t j) const {
    if (j == 0) return 0;
    if (j > rank(x, n_)) throw not_found("select beyond occurrences");
    size_t lo = 1, hi = n_;
    while (lo < hi) {
        size_t mid = (lo + hi) / 2;
        if (rank(x, mid) >= j)
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo;
}

SpaceReport TernarySequence::space_report() const {
    SpaceReport r;
    r.payload_bits = 2 * n_;
    r.index_bits = indexed_ ? samples_.size() * 64 : 0;
    r.entropy_bound_bits = ternary_entropy_bits(n_);
    r.dense_payload_bits = 8 * ((n_ + 4) / 5);
    return r;
}

std::vector<uint8_t> TernarySequence::symbols() const {
    std::vector<uint8_t> s(n_);
    for (size_t i = 1; i <= n_; ++i) s[i - 1] = at(i);
    return s;
}

void TernarySequence::serialize(ByteWriter& w, Packing p) const {
    write_header(w, n_, static_cast<uint8_t>(p));
    std::vector<uint8_t> bytes;
    if (p == Packing::two_bit) {
        bytes.assign((n_ + 3) / 4, 0);
        for (size_t i = 0; i < n_; ++i) bytes[i / 4] |= uint8_t(at(i + 1) << (6 - 2 * (i % 4)));
    } else {
        bytes.assign((n_ + 4) / 5, 0);
        for (size_t i = 0; i < n_; ++i) bytes[i / 5] = uint8_t(bytes[i / 5] * 3 + (at(i + 1) - 1));
        // left-align a short final group so the first symbol stays most significant
        if (n_ % 5)
            for (size_t t = n_ % 5; t < 5; ++t) bytes.back() = uint8_t(bytes.back() * 3);
    }
    w.raw(bytes.data(), bytes.size());
}

TernarySequence TernarySequence::deserialize(ByteReader& r) {
    r.expect_magic(kMagic);
    if (r.u32() != kVersion) throw format_error("unsupported TKB1 version");
    uint64_t n = r.u64();
    uint8_t mode = r.u8();
    TernarySequence s;
    if (mode == static_cast<uint8_t>(Packing::two_bit)) {
        if (n > r.remaining() * 4) throw format_error("truncated ternary sequence");
        const uint8_t* b = r.take((n + 3) / 4);
        for (size_t i = 0; i < n; ++i) {
            uint8_t x = (b[i / 4] >> (6 - 2 * (i % 4))) & 3;
            if (x == 0) throw format_error("invalid ternary symbol");
            s.push_back(x);
        }
    } else if (mode == static_cast<uint8_t>(Packing::base3)) {
        if (n > r.remaining() * 5) throw format_error("truncated ternary sequence");
        const uint8_t* b = r.take((n + 4) / 5);
        for (size_t g = 0; g < (n + 4) / 5; ++g) {
            if (b[g] >= 243) throw format_error("invalid base-3 group");
            uint8_t digits[5];
            uint8_t v = b[g];
            for (int t = 4; t >= 0; --t) {
                digits[t] = v % 3;
                v /= 3;
            }
            for (size_t t = 0; t < 5 && g * 5 + t < n; ++t) s.push_back(uint8_t(digits[t] + 1));
        }
    } else {
        throw format_error("TKB1 payload is not a ternary sequence");
    }
    s.build_index();
    return s;
}

std::vector<uint8_t> TernarySequence::to_bytes(Packing p) const {
    ByteWriter w;
    serialize(w, p);
    return w.bytes();
}

TernarySequence TernarySequence::from_bytes(const std::vector<uint8_t>& b) {
    ByteReader r(b);
    return deserialize(r);
}

}  // namespace topk2d
