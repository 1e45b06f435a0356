#include "topk2d/container.hpp"

#include <cmath>

#include "topk2d/bounds.hpp"

namespace topk2d {

std::string to_string(Variant v) { return "thm" + std::to_string(static_cast<int>(v)); }

Variant parse_variant(const std::string& s) {
    for (int t = 1; t <= 6; ++t)
        if (s == "thm" + std::to_string(t)) return static_cast<Variant>(t);
    throw std::invalid_argument("unknown variant: " + s);
}

Container build_container(const Grid2D& g, size_t k, Variant v) {
    Container c;
    c.m = g.m();
    c.n = g.n();
    c.k = k;
    c.variant = v;
    if (v != Variant::thm5 && g.m() != 2) throw shape_error(to_string(v) + " needs a 2 x n grid");
    switch (v) {
        case Variant::thm1: c.enc = build_unsorted(g, k); break;
        case Variant::thm2: c.enc = build_sorted_kn(g, k); break;
        case Variant::thm3: c.enc = build_sorted_ternary(g, k); break;
        case Variant::thm4: c.enc = encode_2xn(g, k); break;
        case Variant::thm5: c.enc = encode_mxn(g, k); break;
        case Variant::thm6: c.enc = build_fast(g, k); break;
    }
    return c;
}

namespace {

const char kMagic[5] = "TKE1";

RowPtr read_row(ByteReader& r) {
    return std::make_shared<const PermutationRowEncoding>(PermutationRowEncoding::deserialize(r));
}

}  // namespace

std::vector<uint8_t> serialize(const Container& c) {
    ByteWriter w;
    w.magic(kMagic);
    w.u32(c.version);
    w.u64(c.m);
    w.u64(c.n);
    w.u64(c.k);
    w.u8(static_cast<uint8_t>(c.variant));
    std::visit(
        [&](const auto& e) {
            using T = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<T, EncodedPair2xN> || std::is_same_v<T, FastQueryStructure>) {
                e.row1->serialize(w);
                e.row2->serialize(w);
                if constexpr (std::is_same_v<T, EncodedPair2xN>)
                    e.serialize_bits(w);
                else
                    e.serialize_extra(w);
            } else if constexpr (std::is_same_v<T, EncodedMxN>) {
                for (const auto& row : e.rows) row->serialize(w);
                for (const auto& [ab, p] : e.pairs) p.serialize_bits(w);
            } else {
                e.serialize(w);
            }
        },
        c.enc);
    return w.bytes();
}

Container deserialize_container(const std::vector<uint8_t>& bytes) {
    ByteReader r(bytes);
    r.expect_magic(kMagic);
    Container c;
    c.version = r.u32();
    if (c.version != 1) throw format_error("unsupported container version " + std::to_string(c.version));
    c.m = r.u64();
    c.n = r.u64();
    c.k = r.u64();
    uint8_t v = r.u8();
    if (v < 1 || v > 6) throw format_error("unknown variant tag " + std::to_string(v));
    c.variant = static_cast<Variant>(v);
    if (c.variant != Variant::thm5 && c.m != 2) throw format_error("variant needs m = 2");
    switch (c.variant) {
        case Variant::thm1: c.enc = UnsortedPrefixEncoding::deserialize(r, c.n, c.k); break;
        case Variant::thm2: c.enc = SortedPrefixBitvectors::deserialize(r, c.n, c.k); break;
        case Variant::thm3: c.enc = SortedPrefixTernary::deserialize(r, c.n, c.k); break;
        case Variant::thm4: {
            auto r1 = read_row(r), r2 = read_row(r);
            c.enc = EncodedPair2xN::deserialize_bits(r, c.n, c.k, r1, r2);
            break;
        }
        case Variant::thm5: {
            EncodedMxN e;
            e.m = c.m;
            e.n = c.n;
            e.k = c.k;
            for (size_t t = 0; t < c.m; ++t) {
                e.rows.push_back(read_row(r));
                if (e.rows.back()->size() != c.n) throw format_error("row length mismatch");
            }
            for (size_t a = 1; a <= c.m; ++a)
                for (size_t b = a + 1; b <= c.m; ++b)
                    e.pairs.emplace(std::pair{a, b}, EncodedPair2xN::deserialize_bits(r, c.n, c.k, e.rows[a - 1],
                                                                                      e.rows[b - 1]));
            c.enc = std::move(e);
            break;
        }
        case Variant::thm6: {
            auto r1 = read_row(r), r2 = read_row(r);
            c.enc = FastQueryStructure::deserialize_extra(r, c.n, c.k, r1, r2);
            break;
        }
    }
    if (r.remaining() != 0) throw format_error("trailing bytes after encoding");
    return c;
}

namespace {

const RowEncoding& row_of(const Container& c, size_t r) {
    return std::visit(
        [&](const auto& e) -> const RowEncoding& {
            using T = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<T, EncodedMxN>)
                return *e.rows.at(r - 1);
            else if constexpr (std::is_same_v<T, EncodedPair2xN> || std::is_same_v<T, FastQueryStructure>)
                return r == 1 ? *e.row1 : *e.row2;
            else
                return r == 1 ? static_cast<const RowEncoding&>(e.row1) : e.row2;
        },
        c.enc);
}

}  // namespace

AnswerList query(const Container& c, const TopKQuery& q) {
    if (q.r1 < 1 || q.r1 > q.r2 || q.r2 > c.m || q.c1 < 1 || q.c1 > q.c2 || q.c2 > c.n)
        throw std::out_of_range("query rectangle out of range");
    if (q.k < 1 || q.k > c.k) throw std::out_of_range("k' must be in 1..k");
    if (q.r1 == q.r2) {
        AnswerList out;
        for (uint32_t col : row_of(c, q.r1).topk_sorted(q.c1, q.c2, q.k))
            out.push_back({static_cast<uint32_t>(q.r1), col});
        if (q.mode == Mode::unsorted) std::sort(out.begin(), out.end());
        return out;
    }
    bool prefix = c.variant == Variant::thm1 || c.variant == Variant::thm2 || c.variant == Variant::thm3;
    if (prefix && q.c1 != 1)
        throw unsupported_query(to_string(c.variant) + " answers only prefix queries (c1 = 1) over both rows");
    AnswerList out;
    switch (c.variant) {
        case Variant::thm1:
            if (q.mode == Mode::sorted) throw unsupported_query("thm1 answers only unsorted queries");
            if (q.k != c.k) throw unsupported_query("thm1 answers only k' = k");
            return query_unsorted_prefix(std::get<UnsortedPrefixEncoding>(c.enc), q.c2);
        case Variant::thm2: out = query_sorted_kn(std::get<SortedPrefixBitvectors>(c.enc), q.c2); break;
        case Variant::thm3: out = query_sorted_ternary(std::get<SortedPrefixTernary>(c.enc), q.c2); break;
        case Variant::thm4: out = query_2xn(std::get<EncodedPair2xN>(c.enc), q.c1, q.c2, q.k); break;
        case Variant::thm5: out = query_mxn(std::get<EncodedMxN>(c.enc), q.r1, q.r2, q.c1, q.c2, q.k); break;
        case Variant::thm6: out = query_fast(std::get<FastQueryStructure>(c.enc), q.c1, q.c2, q.k); break;
    }
    if (out.size() > q.k) out.resize(q.k);
    if (q.mode == Mode::unsorted) std::sort(out.begin(), out.end());
    return out;
}

// ------------------------------------------------------------------- report

nlohmann::json space_report(const Container& c) {
    using nlohmann::json;
    json j;
    j["variant"] = to_string(c.variant);
    j["m"] = c.m;
    j["n"] = c.n;
    j["k"] = c.k;
    uint64_t row_bits = 0;
    for (size_t r = 1; r <= c.m; ++r) row_bits += row_of(c, r).size_bits();
    json comp = json::object(), budget = json::object(), dev = json::object();
    uint64_t n = c.n, k = c.k, m = c.m;
    auto lg3 = std::log2(3.0L);
    std::optional<BoundReport> lower;
    switch (c.variant) {
        case Variant::thm1: {
            const auto& e = std::get<UnsortedPrefixEncoding>(c.enc);
            comp["B_symbols"] = e.B.size();
            comp["B_bits"] = e.B.space_report().dense_payload_bits;
            comp["B_bits_two_bit"] = e.B.space_report().payload_bits;
            comp["B_rank_index_bits"] = e.B.space_report().index_bits;
            budget["extra_bits"] = static_cast<uint64_t>(std::ceil((n - std::min(n, k / 2)) * lg3));
            budget["expression"] = "ceil((n - floor(k/2)) lg 3)";
            j["extra_bits"] = comp["B_bits"];
            if (k >= 2) lower = lower_bound_bits(n, k, BoundVariant::unsorted_3sided);
            break;
        }
        case Variant::thm2: {
            const auto& e = std::get<SortedPrefixBitvectors>(c.enc);
            comp["bitvector_bits"] = e.bits.size();
            budget["extra_bits"] = k * n;
            budget["expression"] = "kn";
            j["extra_bits"] = e.bits.size();
            if (k >= 2) lower = lower_bound_bits(n, k, BoundVariant::sorted_3sided);
            break;
        }
        case Variant::thm3: {
            const auto& e = std::get<SortedPrefixTernary>(c.enc);
            comp["Ao_symbols"] = e.Ao.size();
            comp["Ae_symbols"] = e.Ae.size();
            comp["payload_symbols"] = e.payload_symbols();
            uint64_t bits = e.Ao.space_report().dense_payload_bits + e.Ae.space_report().dense_payload_bits;
            comp["payload_bits"] = bits;
            comp["rank_index_bits"] = e.Ao.space_report().index_bits + e.Ae.space_report().index_bits;
            budget["extra_bits"] = static_cast<uint64_t>(std::ceil(2 * n * lg3));
            budget["expression"] = "ceil(2n lg 3)";
            j["extra_bits"] = bits;
            if (k >= 2) lower = lower_bound_bits(n, k, BoundVariant::sorted_3sided);
            break;
        }
        case Variant::thm4: {
            const auto& e = std::get<EncodedPair2xN>(c.enc);
            comp["X_bits"] = e.X.size();
            dev["colCmp_bits"] = e.colCmp.size();
            dev["leaf_merge_bits"] = e.leafBits.size();
            budget["X_bits"] = 4 * n;
            budget["expression"] = "4n";
            j["extra_bits"] = e.X.size();
            j["X_within_budget"] = e.X.size() <= 4 * n;
            if (k >= 2) lower = lower_bound_bits(n, k, BoundVariant::sorted_4sided);
            break;
        }
        case Variant::thm5: {
            const auto& e = std::get<EncodedMxN>(c.enc);
            comp["pairs"] = e.pairs.size();
            comp["X_bits"] = e.x_bits();
            dev["colCmp_bits"] = e.column_bits();
            dev["leaf_merge_bits"] = e.leaf_bits();
            budget["X_bits"] = 2 * n * m * (m - 1);
            budget["expression"] = "2nm(m-1)";
            j["extra_bits"] = e.x_bits();
            j["X_within_budget"] = e.x_bits() <= 2 * n * m * (m - 1);
            break;
        }
        case Variant::thm6: {
            const auto& e = std::get<FastQueryStructure>(c.enc);
            auto s = e.space();
            comp["graph_bits"] = s.graph_bits;
            comp["graph_edges"] = e.g12.edge_count() + e.g21.edge_count();
            comp["P_bits"] = e.P.size();
            comp["Q12_bits"] = e.Q12.size();
            comp["Q21_bits"] = e.Q21.size();
            budget["graph_bits"] = s.graph_budget_bits;
            budget["pq_bits"] = 3 * n;
            budget["extra_bits"] = s.extra_budget_bits;
            budget["expression"] = "(4k+7)n";
            j["graph_layout"] = "plain right-neighbor arrays, ceil(lg(n+1)) bits per vertex per graph";
            j["extra_bits"] = s.extra_bits();
            j["extra_within_budget"] = s.extra_bits() <= s.extra_budget_bits;
            if (k >= 2) lower = lower_bound_bits(n, k, BoundVariant::sorted_4sided);
            break;
        }
    }
    j["row_bits"] = row_bits;
    j["components"] = comp;
    j["budget"] = budget;
    j["deviations"] = dev;
    uint64_t dev_total = 0;
    for (auto& [key, val] : dev.items()) dev_total += val.get<uint64_t>();
    j["deviation_bits"] = dev_total;
    j["total_bits"] = row_bits + j["extra_bits"].get<uint64_t>() + dev_total;
    if (lower) {
        j["lower_bound"] = {{"variant", to_string(lower->variant)},
                            {"bits", lower->bits},
                            {"expression", lower->expression},
                            {"headline", lower->headline}};
    }
    return j;
}

}  // namespace topk2d
