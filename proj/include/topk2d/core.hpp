#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace topk2d {

struct shape_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct Position {
    uint32_t row = 0;
    uint32_t col = 0;
    auto operator<=>(const Position&) const = default;
};

using AnswerList = std::vector<Position>;

enum class Mode { sorted, unsorted };

struct TopKQuery {
    size_t r1 = 1, r2 = 1, c1 = 1, c2 = 1;
    size_t k = 1;
    Mode mode = Mode::sorted;
};

// m x n grid of distinct ranks 1..mn, row-major.
class Grid2D {
public:
    Grid2D() = default;
    Grid2D(size_t m, size_t n, std::vector<uint32_t> cells);

    size_t m() const { return m_; }
    size_t n() const { return n_; }
    uint32_t at(size_t r, size_t c) const { return cells_[(r - 1) * n_ + (c - 1)]; }
    uint32_t at(Position p) const { return at(p.row, p.col); }
    std::vector<uint32_t> row(size_t r) const;
    const std::vector<uint32_t>& cells() const { return cells_; }
    // rows a and b as a 2 x n grid, re-ranked to 1..2n
    Grid2D pair(size_t a, size_t b) const;

    bool operator==(const Grid2D&) const = default;

private:
    size_t m_ = 0, n_ = 0;
    std::vector<uint32_t> cells_;
};

// uniformly random m x n permutation grid
Grid2D random_grid(size_t m, size_t n, std::mt19937_64& rng);

Grid2D normalize_ranks(const std::vector<std::vector<int64_t>>& raw);
Grid2D grid_from_rows(const std::vector<std::vector<int64_t>>& rows);

AnswerList oracle_topk(const Grid2D& g, const TopKQuery& q);
AnswerList oracle_topk(const Grid2D& g, size_t r1, size_t r2, size_t c1, size_t c2, size_t k,
                       Mode mode = Mode::sorted);

void check_query(const Grid2D& g, const TopKQuery& q);

Grid2D read_grid_csv(std::istream& in);
void write_grid_csv(std::ostream& out, const Grid2D& g);

std::string to_string(Position p);
std::string to_string(const AnswerList& a);

// unordered comparison of answer lists
bool same_set(AnswerList a, AnswerList b);

inline uint32_t ceil_lg(uint64_t x) {
    uint32_t b = 0;
    while ((uint64_t{1} << b) < x) ++b;
    return b;
}

}  // namespace topk2d
