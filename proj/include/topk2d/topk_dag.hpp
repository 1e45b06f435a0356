#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "topk2d/core.hpp"
#include "topk2d/row_topk.hpp"

namespace topk2d {

struct Interval {
    uint32_t a = 0, b = 0;
    auto operator<=>(const Interval&) const = default;
    bool contains(const Interval& o) const { return a <= o.a && o.b <= b; }
    bool contains_col(uint32_t c) const { return a <= c && c <= b; }
    size_t len() const { return b - a + 1; }
};

std::string to_string(Interval iv);

struct DagNode {
    Interval iv;
    std::vector<uint32_t> children;  // left child first
    std::vector<uint32_t> parents;
    uint32_t level = 0;
    bool leaf = false;
    AnswerList top;  // sorted top-k; all cells sorted for a leaf
};

class TopKDag {
public:
    size_t n = 0, k = 0;
    std::vector<DagNode> nodes;  // nodes[0] is the root
    std::map<Interval, uint32_t> index;

    std::optional<uint32_t> find(Interval iv) const;
    size_t nonleaf_count() const;
    size_t edge_count() const;
    std::vector<std::pair<Interval, Interval>> edges() const;
};

bool is_leaf(Interval iv, size_t k);
std::vector<Interval> child_intervals(Interval iv, const AnswerList& top);

TopKDag build_dag(const Grid2D& g, size_t k);
const DagNode& locate_node(const TopKDag& dag, size_t a, size_t b);
// answers of a sorted top-k' query on columns [a,b] read off the dag
AnswerList dag_query(const TopKDag& dag, size_t a, size_t b, size_t kq);

// same node set, edges, levels and answers
bool same_dag(const TopKDag& x, const TopKDag& y, std::string* why = nullptr);

// ---------------------------------------------------------------- traversal

struct TraceStep {
    Interval iv;
    uint8_t visit = 1;
    bool leaf = false;
    std::vector<Position> picks;  // root step holds the whole root answer
    std::vector<uint8_t> bits;    // bits appended to X at this step
    uint32_t leaf_bits = 0;       // leaf-merge bits spent on a leaf
    uint32_t column_bits = 0;     // same-column comparisons read from colCmp
    std::vector<Interval> visit_list;  // snapshot before the step, when recorded
};

struct TraversalTrace {
    std::vector<TraceStep> steps;
    std::map<Position, std::vector<Interval>> ledger;  // position -> picking nodes
    size_t root_bits = 0;
    size_t pick_bits = 0;
    size_t leaf_bits = 0;
    size_t column_lookups = 0;
    size_t inferred = 0;
    size_t fallbacks = 0;  // steps where no node met the eligibility rule

    size_t x_bits() const { return root_bits + pick_bits; }
    size_t max_picks() const;
};

// Source of every comparison the traversal cannot derive on its own.
// Methods return true when the row-1 candidate is the larger one.
class ComparisonSource {
public:
    virtual ~ComparisonSource() = default;
    virtual bool root(std::optional<Position> c1, std::optional<Position> c2) = 0;
    virtual bool pick(Position c1, Position c2) = 0;
    virtual bool column(uint32_t col) = 0;
    virtual bool leaf(Position c1, Position c2) = 0;
    virtual void inferred(Position, Position, bool) {}
};

// Comparisons answered from the grid; records the bits an encoder stores.
class GridComparisons final : public ComparisonSource {
public:
    explicit GridComparisons(const Grid2D& g) : g_(g) {}
    bool root(std::optional<Position> c1, std::optional<Position> c2) override;
    bool pick(Position c1, Position c2) override;
    bool column(uint32_t col) override;
    bool leaf(Position c1, Position c2) override;
    void inferred(Position c1, Position c2, bool row1) override;

    std::vector<uint8_t> x_bits, leaf_bits;

private:
    bool larger(Position a, Position b) const { return g_.at(a) > g_.at(b); }
    const Grid2D& g_;
};

struct TraversalOptions {
    bool record_visit_lists = false;
};

// Replays the traversal using only the row encodings and the comparison source.
// Encoder and decoder run this same routine, so they agree step for step.
TopKDag replay_traversal(size_t n, size_t k, const RowEncoding& row1, const RowEncoding& row2,
                         ComparisonSource& src, TraversalTrace& trace, TraversalOptions opt = {});

// Traversal over a grid; checks the replayed dag against the given one.
TraversalTrace traverse(const TopKDag& dag, const Grid2D& g, TraversalOptions opt = {});

// ---------------------------------------------------------------- checking

struct DagReport {
    bool distinct_answers = true;
    bool containment_is_ancestry = true;
    bool locate_consistent = true;
    bool picks_at_most_two = true;
    bool node_bound = true;
    bool nonleaf_bound = true;  // finding only, not part of ok()
    size_t nodes = 0, nonleaf = 0, max_picks = 0;
    double nodes_per_kn = 0;
    std::vector<std::string> witnesses;

    bool ok() const {
        return distinct_answers && containment_is_ancestry && locate_consistent && picks_at_most_two && node_bound;
    }
};

DagReport verify_dag_properties(const TopKDag& dag, const TraversalTrace& trace, const Grid2D& g);

std::string to_dot(const TopKDag& dag, const TraversalTrace* trace = nullptr);
std::string trace_json_lines(const TraversalTrace& trace);

}  // namespace topk2d
