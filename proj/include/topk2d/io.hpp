#pragma once

#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <vector>

namespace topk2d {

struct format_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// little-endian byte sink
class ByteWriter {
public:
    void u8(uint8_t v) { buf_.push_back(v); }
    void u32(uint32_t v) {
        for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<uint8_t>(v >> (8 * i)));
    }
    void u64(uint64_t v) {
        for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<uint8_t>(v >> (8 * i)));
    }
    void raw(const void* p, size_t len) {
        auto* b = static_cast<const uint8_t*>(p);
        buf_.insert(buf_.end(), b, b + len);
    }
    void magic(const char (&m)[5]) { raw(m, 4); }
    const std::vector<uint8_t>& bytes() const { return buf_; }
    std::vector<uint8_t>& bytes() { return buf_; }

private:
    std::vector<uint8_t> buf_;
};

class ByteReader {
public:
    ByteReader(const uint8_t* p, size_t len) : p_(p), len_(len) {}
    explicit ByteReader(const std::vector<uint8_t>& v) : p_(v.data()), len_(v.size()) {}

    uint8_t u8() {
        need(1);
        return p_[pos_++];
    }
    uint32_t u32() {
        need(4);
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= uint32_t{p_[pos_++]} << (8 * i);
        return v;
    }
    uint64_t u64() {
        need(8);
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= uint64_t{p_[pos_++]} << (8 * i);
        return v;
    }
    const uint8_t* take(size_t len) {
        need(len);
        const uint8_t* r = p_ + pos_;
        pos_ += len;
        return r;
    }
    void expect_magic(const char (&m)[5]) {
        const uint8_t* b = take(4);
        if (std::memcmp(b, m, 4) != 0) throw format_error(std::string("bad magic, expected ") + m);
    }
    size_t remaining() const { return len_ - pos_; }

private:
    void need(size_t len) {
        if (len_ - pos_ < len) throw format_error("truncated input");
    }
    const uint8_t* p_;
    size_t len_;
    size_t pos_ = 0;
};

}  // namespace topk2d
