#include "topk2d/topk_dag.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

#include <json.hpp>

namespace topk2d {

std::string to_string(Interval iv) { return "[" + std::to_string(iv.a) + "," + std::to_string(iv.b) + "]"; }

bool is_leaf(Interval iv, size_t k) { return 2 * iv.len() <= k; }

std::vector<Interval> child_intervals(Interval iv, const AnswerList& top) {
    uint32_t lo = iv.b, hi = iv.a;
    for (Position p : top) {
        lo = std::min(lo, p.col);
        hi = std::max(hi, p.col);
    }
    std::vector<Interval> ch;
    if (iv.a < hi) ch.push_back({iv.a, hi - 1});
    if (lo < iv.b) ch.push_back({lo + 1, iv.b});
    return ch;
}

std::optional<uint32_t> TopKDag::find(Interval iv) const {
    auto it = index.find(iv);
    if (it == index.end()) return std::nullopt;
    return it->second;
}

size_t TopKDag::nonleaf_count() const {
    return std::count_if(nodes.begin(), nodes.end(), [](const DagNode& d) { return !d.leaf; });
}

size_t TopKDag::edge_count() const {
    size_t e = 0;
    for (const auto& d : nodes) e += d.children.size();
    return e;
}

std::vector<std::pair<Interval, Interval>> TopKDag::edges() const {
    std::vector<std::pair<Interval, Interval>> e;
    for (const auto& d : nodes)
        for (uint32_t c : d.children) e.push_back({d.iv, nodes[c].iv});
    std::sort(e.begin(), e.end());
    return e;
}

TopKDag build_dag(const Grid2D& g, size_t k) {
    if (g.m() != 2) throw shape_error("dag construction needs a 2 x n grid");
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    TopKDag dag;
    dag.n = g.n();
    dag.k = k;
    auto add = [&](Interval iv) {
        auto [it, fresh] = dag.index.insert({iv, static_cast<uint32_t>(dag.nodes.size())});
        if (fresh) {
            DagNode d;
            d.iv = iv;
            d.leaf = is_leaf(iv, k);
            d.top = oracle_topk(g, 1, 2, iv.a, iv.b, k);
            dag.nodes.push_back(std::move(d));
        }
        return std::pair{it->second, fresh};
    };
    std::deque<uint32_t> queue{add({1, static_cast<uint32_t>(g.n())}).first};
    while (!queue.empty()) {
        uint32_t id = queue.front();
        queue.pop_front();
        if (dag.nodes[id].leaf) continue;
        for (Interval civ : child_intervals(dag.nodes[id].iv, dag.nodes[id].top)) {
            auto [cid, fresh] = add(civ);
            dag.nodes[id].children.push_back(cid);
            dag.nodes[cid].parents.push_back(id);
            if (fresh) queue.push_back(cid);
        }
    }
    // longest-path levels: parents are strictly longer intervals
    std::vector<uint32_t> order(dag.nodes.size());
    for (uint32_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](uint32_t x, uint32_t y) { return dag.nodes[x].iv.len() > dag.nodes[y].iv.len(); });
    for (uint32_t id : order)
        for (uint32_t c : dag.nodes[id].children)
            dag.nodes[c].level = std::max(dag.nodes[c].level, dag.nodes[id].level + 1);
    return dag;
}

const DagNode& locate_node(const TopKDag& dag, size_t a, size_t b) {
    if (a < 1 || a > b || b > dag.n) throw std::out_of_range("interval out of range");
    Interval q{static_cast<uint32_t>(a), static_cast<uint32_t>(b)};
    uint32_t cur = 0;
    for (bool moved = true; moved;) {
        moved = false;
        for (uint32_t c : dag.nodes[cur].children)
            if (dag.nodes[c].iv.contains(q)) {
                cur = c;
                moved = true;
                break;
            }
    }
    return dag.nodes[cur];
}

AnswerList dag_query(const TopKDag& dag, size_t a, size_t b, size_t kq) {
    if (kq < 1 || kq > dag.k) throw std::out_of_range("k' must be in 1..k");
    const DagNode& d = locate_node(dag, a, b);
    AnswerList out;
    for (Position p : d.top) {
        if (out.size() == kq) break;
        if (p.col >= a && p.col <= b) out.push_back(p);
    }
    return out;
}

bool same_dag(const TopKDag& x, const TopKDag& y, std::string* why) {
    auto fail = [&](const std::string& s) {
        if (why) *why = s;
        return false;
    };
    if (x.n != y.n || x.k != y.k) return fail("n or k differ");
    if (x.nodes.size() != y.nodes.size()) return fail("node counts differ");
    for (const auto& dx : x.nodes) {
        auto j = y.find(dx.iv);
        if (!j) return fail("missing node " + to_string(dx.iv));
        const auto& dy = y.nodes[*j];
        if (dx.top != dy.top) return fail("answers differ at " + to_string(dx.iv));
        if (dx.level != dy.level) return fail("levels differ at " + to_string(dx.iv));
        if (dx.leaf != dy.leaf) return fail("leaf flag differs at " + to_string(dx.iv));
        std::vector<Interval> cx, cy;
        for (uint32_t c : dx.children) cx.push_back(x.nodes[c].iv);
        for (uint32_t c : dy.children) cy.push_back(y.nodes[c].iv);
        if (cx != cy) return fail("children differ at " + to_string(dx.iv));
    }
    return true;
}

size_t TraversalTrace::max_picks() const {
    size_t m = 0;
    for (const auto& [p, v] : ledger) m = std::max(m, v.size());
    return m;
}

// ----------------------------------------------------------------- checking

DagReport verify_dag_properties(const TopKDag& dag, const TraversalTrace& trace, const Grid2D& g) {
    DagReport r;
    size_t N = dag.nodes.size(), n = dag.n, k = dag.k;
    r.nodes = N;
    r.nonleaf = dag.nonleaf_count();
    r.nodes_per_kn = double(N) / double(k * n);
    r.max_picks = trace.max_picks();

    std::set<AnswerList> tops;
    for (const auto& d : dag.nodes)
        if (!tops.insert(d.top).second) {
            r.distinct_answers = false;
            r.witnesses.push_back("repeated answers at " + to_string(d.iv));
        }

    // descendant sets, children before parents
    std::vector<uint32_t> order(N);
    for (uint32_t i = 0; i < N; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](uint32_t x, uint32_t y) { return dag.nodes[x].iv.len() < dag.nodes[y].iv.len(); });
    size_t W = (N + 63) / 64;
    std::vector<std::vector<uint64_t>> desc(N, std::vector<uint64_t>(W, 0));
    for (uint32_t id : order)
        for (uint32_t c : dag.nodes[id].children) {
            desc[id][c / 64] |= uint64_t{1} << (c % 64);
            for (size_t w = 0; w < W; ++w) desc[id][w] |= desc[c][w];
        }
    // nodes inside a leaf may be reached only through other parents
    for (uint32_t q = 0; q < N && r.containment_is_ancestry; ++q)
        for (uint32_t p = 0; p < N; ++p) {
            if (p == q || dag.nodes[q].leaf) continue;
            bool sub = dag.nodes[q].iv.contains(dag.nodes[p].iv);
            bool anc = (desc[q][p / 64] >> (p % 64)) & 1;
            if (sub && !anc)
                for (uint32_t l = 0; l < N && !anc; ++l)
                    anc = dag.nodes[l].leaf && ((desc[q][l / 64] >> (l % 64)) & 1) &&
                          dag.nodes[l].iv.contains(dag.nodes[p].iv);
            if (sub != anc) {
                r.containment_is_ancestry = false;
                r.witnesses.push_back(to_string(dag.nodes[p].iv) + " vs " + to_string(dag.nodes[q].iv));
                break;
            }
        }

    // every interval longer than k/2 has exactly one minimal containing node: count per node
    // the long intervals inside it but inside neither child; shorter ones may sit in two leaves
    int64_t L = int64_t(k / 2) + 1;
    auto tri = [L](int64_t len) {
        int64_t x = len - L + 1;
        return x > 0 ? x * (x + 1) / 2 : 0;
    };
    int64_t total = 0;
    for (const auto& d : dag.nodes) {
        int64_t cnt = tri(d.iv.len());
        std::vector<Interval> ch;
        for (uint32_t c : d.children) ch.push_back(dag.nodes[c].iv);
        for (Interval c : ch) cnt -= tri(c.len());
        if (ch.size() == 2) {
            Interval lc = ch[0], rc = ch[1];
            int64_t lo = std::max(lc.a, rc.a), hi = std::min(lc.b, rc.b);
            cnt += tri(hi - lo + 1);
        }
        total += cnt;
    }
    if (total != tri(int64_t(n))) {
        r.locate_consistent = false;
        r.witnesses.push_back("minimal containing nodes of long intervals are not unique");
    }
    // located answers equal brute-force answers, by a sweep over b
    for (uint32_t a = 1; a <= n && r.locate_consistent; ++a) {
        std::vector<std::pair<uint32_t, Position>> top;
        for (uint32_t b = a; b <= n; ++b) {
            for (uint32_t row = 1; row <= 2; ++row) top.push_back({g.at(row, b), {row, b}});
            std::sort(top.begin(), top.end(), [](auto& x, auto& y) { return x.first > y.first; });
            if (top.size() > k) top.resize(k);
            AnswerList want;
            for (auto& t : top) want.push_back(t.second);
            if (dag_query(dag, a, b, k) != want) {
                r.locate_consistent = false;
                r.witnesses.push_back("located answer differs on " + to_string(Interval{a, b}));
                break;
            }
        }
    }

    r.picks_at_most_two = r.max_picks <= 2;
    if (!r.picks_at_most_two)
        for (const auto& [p, v] : trace.ledger)
            if (v.size() > 2) {
                std::string s = to_string(p) + " picked at";
                for (Interval iv : v) s += " " + to_string(iv);
                r.witnesses.push_back(s);
            }
    r.node_bound = N <= 6 * k * n;
    r.nonleaf_bound = r.nonleaf <= 2 * k * n;
    return r;
}

// ------------------------------------------------------------------- export

std::string to_dot(const TopKDag& dag, const TraversalTrace* trace) {
    std::map<Interval, std::string> notes;
    if (trace)
        for (const auto& s : trace->steps) {
            std::string& t = notes[s.iv];
            if (s.leaf) continue;
            t += t.empty() ? "" : " ";
            t += s.picks.empty() ? "e" : "";
            for (size_t i = 0; i < s.picks.size(); ++i) t += (i ? "," : "") + to_string(s.picks[i]);
        }
    std::ostringstream o;
    o << "digraph topk {\n";
    for (const auto& d : dag.nodes) {
        o << "  \"" << to_string(d.iv) << "\" [label=\"" << to_string(d.iv);
        auto it = notes.find(d.iv);
        if (it != notes.end() && !it->second.empty()) o << "\\n" << it->second;
        o << "\"];\n";
    }
    for (auto& [p, c] : dag.edges()) o << "  \"" << to_string(p) << "\" -> \"" << to_string(c) << "\";\n";
    o << "}\n";
    return o.str();
}

std::string trace_json_lines(const TraversalTrace& trace) {
    std::ostringstream o;
    for (size_t i = 0; i < trace.steps.size(); ++i) {
        const auto& s = trace.steps[i];
        nlohmann::json j;
        j["step"] = i + 1;
        j["interval"] = {s.iv.a, s.iv.b};
        j["visit"] = s.visit;
        if (s.picks.empty())
            j["pick"] = nullptr;
        else if (i == 0) {
            j["pick"] = nlohmann::json::array();
            for (Position p : s.picks) j["pick"].push_back({p.row, p.col});
        } else
            j["pick"] = {s.picks[0].row, s.picks[0].col};
        if (s.bits.empty())
            j["bit"] = nullptr;
        else if (i == 0)
            j["bit"] = s.bits;
        else
            j["bit"] = s.bits[0];
        if (s.leaf) j["leaf_bits"] = s.leaf_bits;
        if (!s.visit_list.empty()) {
            j["visit_list"] = nlohmann::json::array();
            for (Interval iv : s.visit_list) j["visit_list"].push_back({iv.a, iv.b});
        }
        o << j.dump() << '\n';
    }
    return o.str();
}

}  // namespace topk2d
