#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "topk2d/core.hpp"
#include "topk2d/fastquery.hpp"
#include "topk2d/pair4sided.hpp"
#include "topk2d/prefix3sided.hpp"

namespace topk2d {

enum class Variant : uint8_t { thm1 = 1, thm2 = 2, thm3 = 3, thm4 = 4, thm5 = 5, thm6 = 6 };

std::string to_string(Variant v);
Variant parse_variant(const std::string& s);

// query class the stored encoding cannot answer
struct unsupported_query : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct Container {
    uint32_t version = 1;
    size_t m = 0, n = 0, k = 0;
    Variant variant = Variant::thm4;
    std::variant<UnsortedPrefixEncoding, SortedPrefixBitvectors, SortedPrefixTernary, EncodedPair2xN, EncodedMxN,
                 FastQueryStructure>
        enc;
};

Container build_container(const Grid2D& g, size_t k, Variant v);
std::vector<uint8_t> serialize(const Container& c);
Container deserialize_container(const std::vector<uint8_t>& bytes);

// rows are 1-based; prefix variants take (1,2,1,i); r1 == r2 reads a single row
AnswerList query(const Container& c, const TopKQuery& q);

nlohmann::json space_report(const Container& c);

}  // namespace topk2d
