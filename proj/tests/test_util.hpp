#pragma once

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "topk2d/core.hpp"

namespace topk2d::testing {

// the 2 x 9 running example
inline Grid2D example9() {
    return grid_from_rows({{1, 21, 17, 12, 20, 3, 15, 11, 10}, {6, 5, 16, 14, 19, 2, 18, 4, 7}});
}

inline Grid2D rows2(std::vector<int64_t> a, std::vector<int64_t> b) { return grid_from_rows({a, b}); }

// every 2 x n grid over the values 1..2n
template <class F>
void for_each_grid(size_t n, F&& fn) {
    std::vector<uint32_t> cells(2 * n);
    std::iota(cells.begin(), cells.end(), 1u);
    do fn(Grid2D(2, n, cells));
    while (std::next_permutation(cells.begin(), cells.end()));
}

inline AnswerList pos(std::initializer_list<std::pair<uint32_t, uint32_t>> ps) {
    AnswerList a;
    for (auto [r, c] : ps) a.push_back({r, c});
    return a;
}

}  // namespace topk2d::testing
