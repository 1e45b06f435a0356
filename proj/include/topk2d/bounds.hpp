#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace topk2d {

using BigInt = boost::multiprecision::cpp_int;

struct capacity_error : std::length_error {
    using std::length_error::length_error;
};

struct PrefixClassCount {
    size_t i = 0;
    uint64_t count = 0;
};

enum class BoundVariant { unsorted_3sided, sorted_3sided, sorted_4sided };

std::string to_string(BoundVariant v);
BoundVariant parse_bound_variant(const std::string& s);

struct BoundReport {
    size_t n = 0, k = 0;
    BoundVariant variant = BoundVariant::unsorted_3sided;
    uint64_t bits = 0;         // exact expression, o-terms omitted
    double headline_bits = 0;  // asymptotic form
    std::string expression;
    std::string headline;
};

// classes of 2 x (i + k/2) ascending-row arrays with {1..2i} in the first i columns,
// told apart by the sequence of pair sets
PrefixClassCount enumerate_U(size_t i, size_t k);
uint64_t recurrence_U(size_t i);

BigInt count_sorted_classes(size_t i);
// 2 x i ascending-row fillings of {1..2i}, counted one by one
uint64_t enumerate_sorted_classes(size_t i);
// C(2i,i) >= 4^i / sqrt(4i), checked exactly as C^2 * 4i >= 16^i
bool central_binomial_lower_bound_holds(size_t i);

BoundReport lower_bound_bits(size_t n, size_t k, BoundVariant v);

}  // namespace topk2d
