#include <algorithm>
#include <stdexcept>

#include "topk2d/topk_dag.hpp"

namespace topk2d {

// ------------------------------------------------------- grid comparisons

bool GridComparisons::root(std::optional<Position> c1, std::optional<Position> c2) {
    bool row1 = c1 && (!c2 || larger(*c1, *c2));
    x_bits.push_back(row1 ? 0 : 1);
    return row1;
}

bool GridComparisons::pick(Position c1, Position c2) {
    bool row1 = larger(c1, c2);
    x_bits.push_back(row1 ? 0 : 1);
    return row1;
}

bool GridComparisons::column(uint32_t col) { return g_.at(1, col) > g_.at(2, col); }

bool GridComparisons::leaf(Position c1, Position c2) {
    bool row1 = larger(c1, c2);
    leaf_bits.push_back(row1 ? 0 : 1);
    return row1;
}

void GridComparisons::inferred(Position c1, Position c2, bool row1) {
    if (row1 != larger(c1, c2)) throw std::logic_error("inferred comparison is wrong");
}

// ------------------------------------------------------------------ replay

namespace {

enum State : uint8_t { unvisited, half, visited };

struct Node {
    Interval iv;
    bool leaf = false;
    State state = unvisited;
    bool processed = false;
    uint32_t level = 0;
    std::vector<uint32_t> parents, children;
    AnswerList known;
    std::vector<uint32_t> ord[2];  // top (k+2) columns of each row inside iv
};

struct Cands {
    std::optional<Position> c1, c2;
    bool both() const { return c1 && c2; }
};

struct Pending {
    uint32_t id;
    size_t len;
    Cands cs;
    Position pot[4];
    int npot = 0;
};

class Replay {
public:
    Replay(size_t n, size_t k, const RowEncoding& r1, const RowEncoding& r2, ComparisonSource& src,
           TraversalTrace& trace, TraversalOptions opt)
        : n_(n), k_(k), rows_{&r1, &r2}, src_(src), trace_(trace), opt_(opt),
          known_index_(2 * n), det_index_(2 * n) {}

    TopKDag run();

private:
    size_t key(Position p) const { return (p.row - 1) * n_ + (p.col - 1); }

    uint32_t node_for(Interval iv) {
        auto it = ids_.find(iv);
        if (it != ids_.end()) return it->second;
        uint32_t id = static_cast<uint32_t>(nodes_.size());
        ids_.emplace(iv, id);
        Node nd;
        nd.iv = iv;
        nd.leaf = is_leaf(iv, k_);
        for (int r = 0; r < 2; ++r) nd.ord[r] = rows_[r]->topk_sorted(iv.a, iv.b, k_ + 2);
        nodes_.push_back(std::move(nd));
        return id;
    }

    // t-th largest (1-based) of a row inside the node
    std::optional<Position> nth(const Node& nd, int row, size_t t) const {
        if (t == 0 || t > nd.ord[row - 1].size()) return std::nullopt;
        return Position{static_cast<uint32_t>(row), nd.ord[row - 1][t - 1]};
    }

    static void count_rows(const AnswerList& a, size_t& f, size_t& s) {
        f = s = 0;
        for (Position p : a) (p.row == 1 ? f : s)++;
    }

    Cands cands(const Node& nd, size_t f, size_t s) const { return {nth(nd, 1, f + 1), nth(nd, 2, s + 1)}; }

    // longest restriction of a visited parent's answers to the node
    AnswerList prefix(const Node& nd) const {
        AnswerList best;
        for (uint32_t q : nd.parents) {
            const Node& pq = nodes_[q];
            if (pq.state != visited) continue;
            size_t cnt = 0;
            for (Position p : pq.known) cnt += nd.iv.contains_col(p.col);
            if (cnt <= best.size()) continue;
            best.clear();
            for (Position p : pq.known)
                if (nd.iv.contains_col(p.col)) best.push_back(p);
        }
        return best;
    }

    AnswerList current(const Node& nd) const { return nd.state == half ? nd.known : prefix(nd); }

    // answer from a processed node containing both columns that already orders one of them
    std::optional<bool> infer(Position c1, Position c2) const {
        uint32_t lo = std::min(c1.col, c2.col), hi = std::max(c1.col, c2.col);
        for (Position c : {c1, c2})
            for (uint32_t q : known_index_[key(c)]) {
                const Node& nd = nodes_[q];
                if (nd.iv.a > lo || hi > nd.iv.b) continue;
                for (Position p : nd.known) {
                    if (p == c1) return true;
                    if (p == c2) return false;
                }
            }
        return std::nullopt;
    }

    void index_known(uint32_t id, size_t from) {
        const Node& nd = nodes_[id];
        for (size_t t = from; t < nd.known.size(); ++t) known_index_[key(nd.known[t])].push_back(id);
    }

    void mark_processed(uint32_t id, size_t old_known) {
        Node& nd = nodes_[id];
        if (!nd.processed) {
            nd.processed = true;
            index_known(id, 0);
        } else {
            index_known(id, old_known);
        }
    }

    void add_children(uint32_t id);
    Pending pending_info(uint32_t id) const;
    bool ancestor_pending(size_t idx) const;
    bool eligible(size_t idx) const;
    void process(uint32_t id);
    void process_leaf(uint32_t id, uint8_t visit);

    size_t n_, k_;
    const RowEncoding* rows_[2];
    ComparisonSource& src_;
    TraversalTrace& trace_;
    TraversalOptions opt_;

    std::vector<Node> nodes_;
    std::map<Interval, uint32_t> ids_;
    std::vector<std::vector<uint32_t>> known_index_;  // position -> processed nodes knowing it
    std::vector<std::vector<uint32_t>> det_index_;    // position -> nodes that determined it
    std::vector<uint32_t> vl_;                        // visit-list
    std::vector<Pending> info_;                       // per visit-list entry, this step
    std::vector<Interval> snapshot_;
};

void Replay::add_children(uint32_t id) {
    if (nodes_[id].leaf) return;
    for (Interval civ : child_intervals(nodes_[id].iv, nodes_[id].known)) {
        bool fresh = !ids_.count(civ);
        uint32_t c = node_for(civ);
        if (!fresh && nodes_[c].processed) throw std::logic_error("child processed before its parent");
        nodes_[id].children.push_back(c);
        nodes_[c].parents.push_back(id);
        nodes_[c].level = std::max(nodes_[c].level, nodes_[id].level + 1);
        if (fresh) vl_.push_back(c);
    }
}

Pending Replay::pending_info(uint32_t id) const {
    const Node& nd = nodes_[id];
    Pending pi;
    pi.id = id;
    AnswerList cur = current(nd);
    size_t f, s;
    count_rows(cur, f, s);
    pi.len = cur.size();
    if (nd.leaf) return pi;
    pi.cs = cands(nd, f, s);
    if (pi.cs.c1) pi.pot[pi.npot++] = *pi.cs.c1;
    if (pi.cs.c2) pi.pot[pi.npot++] = *pi.cs.c2;
    // candidates a second visit could bring in
    if (pi.cs.both() && cur.size() + 2 <= k_) {
        if (auto x = nth(nd, 1, f + 2)) pi.pot[pi.npot++] = *x;
        if (auto x = nth(nd, 2, s + 2)) pi.pot[pi.npot++] = *x;
    }
    return pi;
}

bool Replay::ancestor_pending(size_t idx) const {
    const Interval& iv = nodes_[vl_[idx]].iv;
    for (size_t j = 0; j < vl_.size(); ++j)
        if (j != idx && nodes_[vl_[j]].iv.contains(iv)) return true;
    return false;
}

bool Replay::eligible(size_t idx) const {
    if (ancestor_pending(idx)) return false;
    const Pending& me = info_[idx];
    const Node& nd = nodes_[me.id];
    if (nd.leaf || !me.cs.both()) return true;
    if (infer(*me.cs.c1, *me.cs.c2)) return true;
    auto incomparable = [](Interval x, Interval y) { return !x.contains(y) && !y.contains(x); };
    for (Position c : {*me.cs.c1, *me.cs.c2}) {
        bool left = false, right = false, pending = false;
        for (size_t j = 0; j < vl_.size(); ++j) {
            if (j == idx) continue;
            const Pending& o = info_[j];
            const Node& on = nodes_[o.id];
            if (on.leaf || !incomparable(nd.iv, on.iv)) continue;
            if (o.cs.c1 == me.cs.c1 && o.cs.c2 == me.cs.c2) continue;
            if (std::find(o.pot, o.pot + o.npot, c) == o.pot + o.npot) continue;
            (on.iv.a < nd.iv.a ? left : right) = true;
            pending = true;
        }
        for (uint32_t q : det_index_[key(c)]) {
            const Node& on = nodes_[q];
            if (q == me.id || !incomparable(nd.iv, on.iv)) continue;
            (on.iv.a < nd.iv.a ? left : right) = true;
        }
        if (left && right && pending) return false;
    }
    return true;
}

void Replay::process_leaf(uint32_t id, uint8_t visit) {
    Node& nd = nodes_[id];
    TraceStep step;
    step.iv = nd.iv;
    step.visit = visit;
    step.leaf = true;
    AnswerList cur = prefix(nd);
    size_t cells = 2 * nd.iv.len();
    while (cur.size() < cells) {
        size_t f, s;
        count_rows(cur, f, s);
        Cands cs = cands(nd, f, s);
        if (!cs.both()) {
            cur.push_back(cs.c1 ? *cs.c1 : *cs.c2);
            continue;
        }
        bool row1;
        if (cs.c1->col == cs.c2->col) {
            row1 = src_.column(cs.c1->col);
            ++step.column_bits;
            ++trace_.column_lookups;
        } else if (auto r = infer(*cs.c1, *cs.c2)) {
            row1 = *r;
            src_.inferred(*cs.c1, *cs.c2, row1);
            ++trace_.inferred;
        } else {
            row1 = src_.leaf(*cs.c1, *cs.c2);
            ++step.leaf_bits;
            ++trace_.leaf_bits;
        }
        cur.push_back(row1 ? *cs.c1 : *cs.c2);
    }
    nd.known = std::move(cur);
    nd.state = visited;
    mark_processed(id, 0);
    vl_.erase(std::find(vl_.begin(), vl_.end(), id));
    trace_.steps.push_back(std::move(step));
}

void Replay::process(uint32_t id) {
    Node& nd = nodes_[id];
    uint8_t visit = nd.state == unvisited ? 1 : 2;
    if (nd.leaf) {
        process_leaf(id, visit);
        return;
    }
    AnswerList pre = prefix(nd);
    size_t diff = k_ - pre.size();
    if (diff < 1 || diff > 2) throw std::logic_error("node differs from its parents by " + std::to_string(diff));
    AnswerList cur = nd.state == half ? nd.known : pre;
    size_t old_known = nd.known.size();

    TraceStep step;
    step.iv = nd.iv;
    step.visit = visit;
    size_t f, s;
    count_rows(cur, f, s);
    Cands cs = cands(nd, f, s);
    Position chosen;
    if (!cs.both()) {
        if (!cs.c1 && !cs.c2) throw std::logic_error("node has no candidates");
        chosen = cs.c1 ? *cs.c1 : *cs.c2;
    } else if (auto r = infer(*cs.c1, *cs.c2)) {
        src_.inferred(*cs.c1, *cs.c2, *r);
        ++trace_.inferred;
        chosen = *r ? *cs.c1 : *cs.c2;
    } else {
        bool row1 = src_.pick(*cs.c1, *cs.c2);
        chosen = row1 ? *cs.c1 : *cs.c2;
        step.picks.push_back(chosen);
        step.bits.push_back(row1 ? 0 : 1);
        ++trace_.pick_bits;
        trace_.ledger[chosen].push_back(nd.iv);
    }
    cur.push_back(chosen);
    det_index_[key(chosen)].push_back(id);

    bool finish = diff == 1 || nd.state == half || !cs.both();
    if (finish) {
        while (cur.size() < k_) {
            count_rows(cur, f, s);
            Cands rest = cands(nd, f, s);
            if (rest.both() || (!rest.c1 && !rest.c2)) throw std::logic_error("unexpected candidates while completing");
            Position p = rest.c1 ? *rest.c1 : *rest.c2;
            cur.push_back(p);
            det_index_[key(p)].push_back(id);
        }
        nd.known = std::move(cur);
        nd.state = visited;
        mark_processed(id, old_known);
        vl_.erase(std::find(vl_.begin(), vl_.end(), id));
        add_children(id);
    } else {
        nd.known = std::move(cur);
        nd.state = half;
        mark_processed(id, old_known);
    }
    trace_.steps.push_back(std::move(step));
}

TopKDag Replay::run() {
    if (n_ < 1 || k_ < 1) throw std::invalid_argument("need n >= 1 and k >= 1");
    uint32_t root = node_for({1, static_cast<uint32_t>(n_)});
    Node& rt = nodes_[root];
    // root: one stored bit per answer
    {
        TraceStep step;
        step.iv = rt.iv;
        size_t want = std::min(k_, 2 * n_);
        auto r1 = rows_[0]->topk_sorted(1, n_, want), r2 = rows_[1]->topk_sorted(1, n_, want);
        size_t a = 0, b = 0;
        while (rt.known.size() < want) {
            std::optional<Position> c1, c2;
            if (a < r1.size()) c1 = Position{1, r1[a]};
            if (b < r2.size()) c2 = Position{2, r2[b]};
            bool row1 = src_.root(c1, c2);
            if ((row1 && !c1) || (!row1 && !c2)) throw std::runtime_error("root bits name an exhausted row");
            Position p = row1 ? *c1 : *c2;
            (row1 ? a : b)++;
            rt.known.push_back(p);
            step.picks.push_back(p);
            step.bits.push_back(row1 ? 0 : 1);
            trace_.ledger[p].push_back(rt.iv);
            det_index_[key(p)].push_back(root);
        }
        trace_.root_bits = want;
        rt.state = visited;
        step.leaf = rt.leaf;
        trace_.steps.push_back(std::move(step));
        mark_processed(root, 0);
        add_children(root);
    }

    while (!vl_.empty()) {
        // ties keep insertion order
        std::stable_sort(vl_.begin(), vl_.end(), [&](uint32_t x, uint32_t y) {
            const Node &nx = nodes_[x], &ny = nodes_[y];
            return std::pair{nx.level, nx.iv.a} < std::pair{ny.level, ny.iv.a};
        });
        info_.clear();
        for (uint32_t id : vl_) info_.push_back(pending_info(id));
        if (opt_.record_visit_lists) {
            std::vector<Interval> snap;
            for (uint32_t id : vl_) snap.push_back(nodes_[id].iv);
            snapshot_ = std::move(snap);
        }
        size_t pick = vl_.size();
        for (size_t j = 0; j < vl_.size(); ++j)
            if (eligible(j)) {
                pick = j;
                break;
            }
        if (pick == vl_.size()) {
            ++trace_.fallbacks;
            for (size_t j = 0; j < vl_.size(); ++j)
                if (!ancestor_pending(j)) {
                    pick = j;
                    break;
                }
            if (pick == vl_.size()) throw std::logic_error("traversal deadlock");
        }
        size_t before = trace_.steps.size();
        process(vl_[pick]);
        if (opt_.record_visit_lists && trace_.steps.size() > before) trace_.steps.back().visit_list = snapshot_;
    }

    TopKDag dag;
    dag.n = n_;
    dag.k = k_;
    // number nodes breadth-first from the root for a stable layout
    std::vector<int64_t> remap(nodes_.size(), -1);
    std::vector<uint32_t> order{root};
    remap[root] = 0;
    for (size_t h = 0; h < order.size(); ++h)
        for (uint32_t c : nodes_[order[h]].children)
            if (remap[c] < 0) {
                remap[c] = static_cast<int64_t>(order.size());
                order.push_back(c);
            }
    for (uint32_t id : order) {
        const Node& nd = nodes_[id];
        if (nd.state != visited) throw std::logic_error("node left unvisited");
        DagNode d;
        d.iv = nd.iv;
        d.leaf = nd.leaf;
        d.level = nd.level;
        d.top = nd.known;
        if (d.top.size() > k_) d.top.resize(k_);
        for (uint32_t c : nd.children) d.children.push_back(static_cast<uint32_t>(remap[c]));
        for (uint32_t p : nd.parents) d.parents.push_back(static_cast<uint32_t>(remap[p]));
        dag.index[d.iv] = static_cast<uint32_t>(dag.nodes.size());
        dag.nodes.push_back(std::move(d));
    }
    return dag;
}

}  // namespace

TopKDag replay_traversal(size_t n, size_t k, const RowEncoding& row1, const RowEncoding& row2,
                         ComparisonSource& src, TraversalTrace& trace, TraversalOptions opt) {
    Replay r(n, k, row1, row2, src, trace, opt);
    return r.run();
}

TraversalTrace traverse(const TopKDag& dag, const Grid2D& g, TraversalOptions opt) {
    if (g.m() != 2 || g.n() != dag.n) throw shape_error("grid does not match dag");
    auto r1 = PermutationRowEncoding::encode_row(g.row(1));
    auto r2 = PermutationRowEncoding::encode_row(g.row(2));
    GridComparisons src(g);
    TraversalTrace trace;
    TopKDag replayed = replay_traversal(g.n(), dag.k, r1, r2, src, trace, opt);
    std::string why;
    if (!same_dag(dag, replayed, &why)) throw std::logic_error("traversal disagrees with the dag: " + why);
    return trace;
}

}  // namespace topk2d
