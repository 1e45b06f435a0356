#include "topk2d/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>
#include <vector>

namespace topk2d {

std::string to_string(BoundVariant v) {
    switch (v) {
        case BoundVariant::unsorted_3sided: return "unsorted-3sided";
        case BoundVariant::sorted_3sided: return "sorted-3sided";
        case BoundVariant::sorted_4sided: return "sorted-4sided";
    }
    return "?";
}

BoundVariant parse_bound_variant(const std::string& s) {
    for (auto v : {BoundVariant::unsorted_3sided, BoundVariant::sorted_3sided, BoundVariant::sorted_4sided})
        if (to_string(v) == s) return v;
    throw std::invalid_argument("unknown bound variant: " + s);
}

namespace {

// every way to pick `take` of the values in `pool`, kept in ascending order
void for_each_subset(const std::vector<uint32_t>& pool, size_t take,
                     const std::function<void(const std::vector<uint32_t>&, const std::vector<uint32_t>&)>& fn) {
    std::vector<bool> mask(pool.size(), false);
    std::fill(mask.end() - take, mask.end(), true);
    do {
        std::vector<uint32_t> in, out;
        for (size_t t = 0; t < pool.size(); ++t) (mask[t] ? in : out).push_back(pool[t]);
        fn(in, out);
    } while (std::next_permutation(mask.begin(), mask.end()));
}

}  // namespace

PrefixClassCount enumerate_U(size_t i, size_t k) {
    if (i < 1) throw std::invalid_argument("i must be >= 1");
    if (k < 2 || k % 2) throw std::invalid_argument("enumerate_U needs an even k >= 2");
    size_t h = k / 2, n = i + h;
    if (i > 9 || h > 4) throw capacity_error("enumeration too large");
    std::vector<uint32_t> low(2 * i), high(2 * h);
    std::iota(low.begin(), low.end(), 1u);
    std::iota(high.begin(), high.end(), static_cast<uint32_t>(2 * i + 1));
    // an array's class is its list of unsorted prefix top-k answers
    std::set<std::vector<std::vector<uint32_t>>> classes;
    for_each_subset(low, i, [&](const std::vector<uint32_t>& l1, const std::vector<uint32_t>& l2) {
        for_each_subset(high, h, [&](const std::vector<uint32_t>& t1, const std::vector<uint32_t>& t2) {
            std::vector<uint32_t> row1 = l1, row2 = l2;
            row1.insert(row1.end(), t1.begin(), t1.end());
            row2.insert(row2.end(), t2.begin(), t2.end());
            std::vector<std::vector<uint32_t>> sig;
            for (size_t p = 1; p <= n; ++p) {
                std::vector<std::pair<uint32_t, uint32_t>> cells;
                for (size_t c = 0; c < p; ++c) {
                    cells.push_back({row1[c], static_cast<uint32_t>(c)});
                    cells.push_back({row2[c], static_cast<uint32_t>(n + c)});
                }
                std::sort(cells.rbegin(), cells.rend());
                std::vector<uint32_t> ans;
                for (size_t t = 0; t < std::min(k, cells.size()); ++t) ans.push_back(cells[t].second);
                std::sort(ans.begin(), ans.end());
                sig.push_back(std::move(ans));
            }
            classes.insert(std::move(sig));
        });
    });
    return {i, classes.size()};
}

uint64_t recurrence_U(size_t i) {
    if (i < 1) throw std::invalid_argument("i must be >= 1");
    uint64_t a = 1, b = 3;  // U_1, U_2
    if (i == 1) return a;
    for (size_t t = 3; t <= i; ++t) {
        uint64_t c = 3 * a + 2 * (b - a);
        a = b;
        b = c;
    }
    return b;
}

BigInt count_sorted_classes(size_t i) {
    if (i < 1) throw std::invalid_argument("i must be >= 1");
    BigInt c = 1;
    for (size_t t = 1; t <= i; ++t) c = c * (i + t) / t;
    return c;
}

uint64_t enumerate_sorted_classes(size_t i) {
    if (i < 1) throw std::invalid_argument("i must be >= 1");
    if (i > 5) throw capacity_error("enumeration too large");
    std::vector<uint32_t> cells(2 * i);
    std::iota(cells.begin(), cells.end(), 1u);
    uint64_t count = 0;
    do {
        bool ok = true;
        for (size_t c = 1; c < i && ok; ++c) ok = cells[c - 1] < cells[c] && cells[i + c - 1] < cells[i + c];
        count += ok;
    } while (std::next_permutation(cells.begin(), cells.end()));
    return count;
}

bool central_binomial_lower_bound_holds(size_t i) {
    BigInt c = count_sorted_classes(i);
    BigInt rhs = 1;
    for (size_t t = 0; t < i; ++t) rhs *= 16;
    return c * c * (4 * i) >= rhs;
}

BoundReport lower_bound_bits(size_t n, size_t k, BoundVariant v) {
    if (n < 1 || k < 1) throw std::invalid_argument("need n >= 1 and k >= 1");
    BoundReport r;
    r.n = n;
    r.k = k;
    r.variant = v;
    size_t ke = k % 2 ? k - 1 : k;
    if (ke == 0) throw std::invalid_argument("lower bounds need k >= 2");
    if (v == BoundVariant::unsorted_3sided) {
        double rate = std::log2(1.0 + std::sqrt(2.0));
        size_t h = ke / 2;
        r.bits = n <= h ? 0 : static_cast<uint64_t>(std::ceil((n - h) * rate));
        r.headline_bits = n <= h ? 0 : 1.27 * double(n - h);
        r.expression = "ceil((n-k/2) lg(1+sqrt 2))";
        r.headline = "1.27(n-k/2) - o(n)";
    } else {
        BigInt c = count_sorted_classes(ke / 2);
        double lg = std::log2(c.convert_to<double>());
        r.bits = static_cast<uint64_t>(std::ceil(2.0 * double(n) / double(ke) * lg - 1e-9));
        r.headline_bits = 2.0 * double(n);
        r.expression = "ceil((2n/k) lg C(k,k/2))";
        r.headline = "2n - O(lg n)";
    }
    if (k != ke) r.expression += " with k-1 for odd k";
    return r;
}

}  // namespace topk2d
