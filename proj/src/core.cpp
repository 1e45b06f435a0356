#include "topk2d/core.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace topk2d {

Grid2D::Grid2D(size_t m, size_t n, std::vector<uint32_t> cells) : m_(m), n_(n), cells_(std::move(cells)) {
    if (m == 0 || n == 0) throw shape_error("grid must be non-empty");
    if (cells_.size() != m * n) throw shape_error("cell count does not match m*n");
    std::vector<bool> seen(m * n + 1, false);
    for (uint32_t v : cells_) {
        if (v < 1 || v > m * n || seen[v]) throw shape_error("cells must be a permutation of 1..mn");
        seen[v] = true;
    }
}

std::vector<uint32_t> Grid2D::row(size_t r) const {
    return {cells_.begin() + (r - 1) * n_, cells_.begin() + r * n_};
}

Grid2D Grid2D::pair(size_t a, size_t b) const {
    std::vector<std::vector<int64_t>> raw(2);
    for (size_t c = 1; c <= n_; ++c) {
        raw[0].push_back(at(a, c));
        raw[1].push_back(at(b, c));
    }
    return normalize_ranks(raw);
}

Grid2D normalize_ranks(const std::vector<std::vector<int64_t>>& raw) {
    if (raw.empty() || raw[0].empty()) throw shape_error("empty grid");
    size_t m = raw.size(), n = raw[0].size();
    for (const auto& r : raw)
        if (r.size() != n) throw shape_error("ragged grid");
    std::vector<size_t> idx(m * n);
    std::iota(idx.begin(), idx.end(), 0);
    // stable sort keeps row-major (lexicographic) order among equal values
    std::stable_sort(idx.begin(), idx.end(),
                     [&](size_t x, size_t y) { return raw[x / n][x % n] < raw[y / n][y % n]; });
    std::vector<uint32_t> cells(m * n);
    for (size_t r = 0; r < idx.size(); ++r) cells[idx[r]] = static_cast<uint32_t>(r + 1);
    return Grid2D(m, n, std::move(cells));
}

Grid2D grid_from_rows(const std::vector<std::vector<int64_t>>& rows) { return normalize_ranks(rows); }

void check_query(const Grid2D& g, const TopKQuery& q) {
    if (q.r1 < 1 || q.r1 > q.r2 || q.r2 > g.m() || q.c1 < 1 || q.c1 > q.c2 || q.c2 > g.n())
        throw std::out_of_range("query rectangle out of range");
    if (q.k < 1) throw std::out_of_range("k must be >= 1");
}

AnswerList oracle_topk(const Grid2D& g, const TopKQuery& q) {
    check_query(g, q);
    AnswerList all;
    for (size_t r = q.r1; r <= q.r2; ++r)
        for (size_t c = q.c1; c <= q.c2; ++c)
            all.push_back({static_cast<uint32_t>(r), static_cast<uint32_t>(c)});
    std::sort(all.begin(), all.end(), [&](Position x, Position y) { return g.at(x) > g.at(y); });
    if (all.size() > q.k) all.resize(q.k);
    if (q.mode == Mode::unsorted) std::sort(all.begin(), all.end());
    return all;
}

AnswerList oracle_topk(const Grid2D& g, size_t r1, size_t r2, size_t c1, size_t c2, size_t k, Mode mode) {
    return oracle_topk(g, TopKQuery{r1, r2, c1, c2, k, mode});
}

Grid2D read_grid_csv(std::istream& in) {
    std::vector<std::vector<int64_t>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::vector<int64_t> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            size_t used = 0;
            int64_t v = 0;
            try {
                v = std::stoll(cell, &used);
            } catch (const std::exception&) {
                throw shape_error("bad CSV cell: '" + cell + "'");
            }
            if (cell.find_first_not_of(" \t", used) != std::string::npos)
                throw shape_error("bad CSV cell: '" + cell + "'");
            row.push_back(v);
        }
        rows.push_back(std::move(row));
    }
    return normalize_ranks(rows);
}

void write_grid_csv(std::ostream& out, const Grid2D& g) {
    out << "# " << g.m() << ' ' << g.n() << '\n';
    for (size_t r = 1; r <= g.m(); ++r) {
        for (size_t c = 1; c <= g.n(); ++c) out << (c > 1 ? "," : "") << g.at(r, c);
        out << '\n';
    }
}

std::string to_string(Position p) { return "(" + std::to_string(p.row) + "," + std::to_string(p.col) + ")"; }

std::string to_string(const AnswerList& a) {
    std::string s;
    for (size_t i = 0; i < a.size(); ++i) s += (i ? " " : "") + to_string(a[i]);
    return s;
}

bool same_set(AnswerList a, AnswerList b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return a == b;
}

Grid2D random_grid(size_t m, size_t n, std::mt19937_64& rng) {
    std::vector<uint32_t> cells(m * n);
    std::iota(cells.begin(), cells.end(), 1u);
    std::shuffle(cells.begin(), cells.end(), rng);
    return Grid2D(m, n, std::move(cells));
}

}  // namespace topk2d
