#include <gtest/gtest.h>

#include <cmath>

#include "topk2d/bounds.hpp"

using namespace topk2d;

TEST(EnumerateU, SmallPrefixes) {
    EXPECT_EQ(enumerate_U(1, 2).count, 1u);
    EXPECT_EQ(enumerate_U(2, 2).count, 3u);
    EXPECT_EQ(enumerate_U(3, 2).count, 7u);
    EXPECT_EQ(enumerate_U(4, 2).count, 17u);
}

TEST(EnumerateU, MatchesRecurrenceForKOfTwo) {
    for (size_t i = 1; i <= 6; ++i) EXPECT_EQ(enumerate_U(i, 2).count, recurrence_U(i)) << i;
}

TEST(EnumerateU, NeverBelowRecurrence) {
    for (size_t i = 1; i <= 5; ++i) EXPECT_GE(enumerate_U(i, 4).count, recurrence_U(i)) << i;
    EXPECT_EQ(enumerate_U(3, 4).count, 7u);
}

TEST(EnumerateU, MonotoneInI) {
    for (size_t i = 2; i <= 6; ++i) EXPECT_GE(enumerate_U(i, 2).count, enumerate_U(i - 1, 2).count);
}

TEST(EnumerateU, CapacityAndArgumentErrors) {
    EXPECT_THROW(enumerate_U(10, 2), capacity_error);
    EXPECT_THROW(enumerate_U(2, 3), std::invalid_argument);
    EXPECT_THROW(enumerate_U(0, 2), std::invalid_argument);
}

TEST(RecurrenceU, Values) {
    EXPECT_EQ(recurrence_U(1), 1u);
    EXPECT_EQ(recurrence_U(2), 3u);
    EXPECT_EQ(recurrence_U(3), 7u);
    EXPECT_EQ(recurrence_U(4), 17u);
}

TEST(RecurrenceU, GrowthRate) {
    double ratio = double(recurrence_U(21)) / double(recurrence_U(20));
    EXPECT_NEAR(ratio, 1 + std::sqrt(2.0), 1e-9);
}

TEST(SortedClasses, CentralBinomial) {
    EXPECT_EQ(count_sorted_classes(1), 2);
    EXPECT_EQ(count_sorted_classes(2), 6);
    EXPECT_EQ(count_sorted_classes(3), 20);
    EXPECT_EQ(count_sorted_classes(30), BigInt("118264581564861424"));
}

TEST(SortedClasses, EnumerationAgrees) {
    for (size_t i = 1; i <= 5; ++i) EXPECT_EQ(BigInt(enumerate_sorted_classes(i)), count_sorted_classes(i)) << i;
    EXPECT_THROW(enumerate_sorted_classes(6), capacity_error);
}

TEST(SortedClasses, LowerBoundHolds) {
    for (size_t i = 1; i <= 64; ++i) EXPECT_TRUE(central_binomial_lower_bound_holds(i)) << i;
}

TEST(LowerBoundBits, UnsortedThreeSided) {
    EXPECT_EQ(lower_bound_bits(100, 4, BoundVariant::unsorted_3sided).bits, 125u);
    EXPECT_EQ(lower_bound_bits(2, 4, BoundVariant::unsorted_3sided).bits, 0u);
    EXPECT_EQ(lower_bound_bits(1, 6, BoundVariant::unsorted_3sided).bits, 0u);
}

TEST(LowerBoundBits, SortedThreeSided) {
    EXPECT_EQ(lower_bound_bits(100, 4, BoundVariant::sorted_3sided).bits, 130u);
    EXPECT_EQ(lower_bound_bits(100, 2, BoundVariant::sorted_3sided).bits, 100u);
}

TEST(LowerBoundBits, OddKUsesKMinusOne) {
    EXPECT_EQ(lower_bound_bits(100, 5, BoundVariant::unsorted_3sided).bits,
              lower_bound_bits(100, 4, BoundVariant::unsorted_3sided).bits);
    EXPECT_THROW(lower_bound_bits(10, 1, BoundVariant::sorted_3sided), std::invalid_argument);
}

TEST(BoundVariantNames, RoundTrip) {
    for (auto v : {BoundVariant::unsorted_3sided, BoundVariant::sorted_3sided, BoundVariant::sorted_4sided})
        EXPECT_EQ(parse_bound_variant(to_string(v)), v);
    EXPECT_THROW(parse_bound_variant("sideways"), std::invalid_argument);
}
