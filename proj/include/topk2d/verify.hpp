#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "topk2d/container.hpp"
#include "topk2d/core.hpp"

namespace topk2d {

// Mismatches between an encoding's answers and the brute-force answers.
struct Mismatch {
    std::string what;
};

// every prefix (thm1..3) or every range (thm4..6) of a 2 x n grid, all k' <= k where supported
std::vector<Mismatch> check_variant(const Grid2D& g, size_t k, Variant v, bool round_trip);
// every rectangle of an m x n grid, k' <= k
std::vector<Mismatch> check_mxn(const Grid2D& g, size_t k, bool round_trip);

struct VerifyOptions {
    std::string scope = "all";  // all | dag | encodings | fastquery | bounds
    double budget_seconds = 60;
    uint64_t seed = 1;
};

struct VerifyResult {
    bool ok = true;
    nlohmann::json summary;
};

VerifyResult run_verify(const VerifyOptions& opt, std::ostream& log);

}  // namespace topk2d
