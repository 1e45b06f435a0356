#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "topk2d/io.hpp"

namespace topk2d {

// Sorted 2-sided top-k on one row, positions only (1-based columns).
class RowEncoding {
public:
    virtual ~RowEncoding() = default;
    virtual size_t size() const = 0;
    virtual std::vector<uint32_t> topk_sorted(size_t i, size_t j, size_t k) const = 0;
    virtual uint64_t size_bits() const = 0;

    // t-th largest column in [i,j], or 0 when the range has fewer than t cells
    uint32_t kth(size_t i, size_t j, size_t t) const;
    // true if column x holds a larger value than column y (both answers of a top-k on [min,max])
    bool larger(size_t x, size_t y, size_t k) const;
};

// Reference encoding: the rank of every position within its row.
class PermutationRowEncoding final : public RowEncoding {
public:
    PermutationRowEncoding() = default;
    explicit PermutationRowEncoding(std::vector<uint32_t> perm);

    static PermutationRowEncoding encode_row(const std::vector<int64_t>& row);
    static PermutationRowEncoding encode_row(const std::vector<uint32_t>& row);

    size_t size() const override { return perm_.size(); }
    std::vector<uint32_t> topk_sorted(size_t i, size_t j, size_t k) const override;
    uint64_t size_bits() const override;
    const std::vector<uint32_t>& perm() const { return perm_; }

    void serialize(ByteWriter& w) const;
    static PermutationRowEncoding deserialize(ByteReader& r);

    bool operator==(const PermutationRowEncoding& o) const { return perm_ == o.perm_; }

private:
    void build_sparse_table();
    uint32_t argmax(size_t i, size_t j) const;  // 0-based inclusive
    std::vector<uint32_t> perm_;
    // query acceleration rebuilt from perm; not part of the stored encoding
    std::vector<std::vector<uint32_t>> table_;
};

}  // namespace topk2d
