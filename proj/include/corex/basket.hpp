#pragma once
// Year-over-year basket dynamics: Bray-Curtis similarity of export-share
// vectors, the typical product vector across destinations, and kept/dropped
// product flags. Bray-Curtis is evaluated as an exact integer rational on
// cent values, so the boundary cases (identical shares, disjoint supports,
// exit) come out exactly 1 and 0.

#include <algorithm>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "corex/common.hpp"
#include "corex/panel.hpp"
#include "corex/transactions.hpp"

namespace corex {

struct BasketChangeRecord {
    std::string country;
    std::string firm;
    i32 year_from = 0;
    i32 year_to = 0;
    double bray_curtis = 0;
    bool exited = false;  // no positive exports in year_to; bray_curtis forced to 0
};

namespace detail {

// 1 - N/D with N = sum_k |a_k * Tb - b_k * Ta| and D = 2 * Ta * Tb, over the
// merged product support. Equals the share-vector Bray-Curtis exactly.
inline double bray_curtis_exact(const std::vector<std::pair<u32, i64>>& prev, i64 total_prev,
                                const std::vector<std::pair<u32, i64>>& cur, i64 total_cur) {
    i128 num = 0;
    std::size_t ip = 0, ic = 0;
    while (ip < prev.size() || ic < cur.size()) {
        i64 b = 0, a = 0;
        u32 kp = ip < prev.size() ? prev[ip].first : ~u32(0);
        u32 kc = ic < cur.size() ? cur[ic].first : ~u32(0);
        if (kp <= kc) { b = prev[ip].second; ++ip; }
        if (kc <= kp) { a = cur[ic].second; ++ic; }
        i128 d = i128(a) * total_prev - i128(b) * total_cur;
        num += d < 0 ? -d : d;
    }
    i128 den = i128(2) * total_cur * total_prev;
    if (num == 0) return 1.0;
    if (num == den) return 0.0;
    return 1.0 - double(num) / double(den);
}

}  // namespace detail

// Basket change from t-1 to t for every firm with positive exports in t-1.
// Firms absent in t are exit records with similarity 0.
inline std::vector<BasketChangeRecord> basket_changes(const FirmProductPanel& panel,
                                                      std::string_view country, i32 t) {
    YearBaskets prev = year_baskets(panel, country, t - 1);

    std::map<u32, std::pair<std::vector<std::pair<u32, i64>>, i64>> cur;
    for (const auto& c : panel.cells) {
        if (c.country != prev.country || c.year != t) continue;
        auto& [basket, total] = cur[c.firm];
        basket.emplace_back(c.product, c.cents);
        total += c.cents;
    }

    std::vector<BasketChangeRecord> out;
    out.reserve(prev.firms.size());
    for (std::size_t fi = 0; fi < prev.firms.size(); ++fi) {
        i64 total_prev = 0;
        for (const auto& [product, cents] : prev.baskets[fi]) total_prev += cents;
        BasketChangeRecord rec;
        rec.country = std::string(country);
        rec.firm = panel.firms.name(prev.firms[fi]);
        rec.year_from = t - 1;
        rec.year_to = t;
        auto it = cur.find(prev.firms[fi]);
        if (it == cur.end()) {
            rec.bray_curtis = 0.0;
            rec.exited = true;
        } else {
            rec.bray_curtis = detail::bray_curtis_exact(prev.baskets[fi], total_prev,
                                                        it->second.first,
                                                        it->second.second);
        }
        out.push_back(std::move(rec));
    }
    return out;
}

// Single-firm variant; the firm must have a basket in t-1.
inline BasketChangeRecord bray_curtis_record(const FirmProductPanel& panel,
                                             std::string_view country,
                                             std::string_view firm, i32 t) {
    if (!panel.firms.contains(firm)) throw Error("no baseline basket");
    u32 firm_id = panel.firms.id(firm);
    auto records = basket_changes(panel, country, t);
    for (auto& r : records)
        if (r.firm == panel.firms.name(firm_id)) return r;
    throw Error("no baseline basket");
}

struct TpvAssignment {
    std::string country;
    std::string firm;
    i32 year = 0;
    i32 destinations = 0;  // distinct destinations with positive flow
    bool has_tpv = false;
    std::vector<std::string> products;  // sorted; empty when has_tpv is false

    auto key() const { return std::tie(country, year, firm); }
    bool operator<(const TpvAssignment& o) const { return key() < o.key(); }
};

// Typical product vector per firm for one country-year: the exact product
// set shipped to the largest number of destinations. The set must recur on
// at least 2 destinations and the firm must serve at least 2; ties go to
// the set with more export value behind it, then to the lexicographically
// smallest product list.
inline std::vector<TpvAssignment> tpv_assignments(const TransactionSet& ts,
                                                  std::string_view country, i32 year) {
    struct Item {
        std::string_view firm, dest, product;
        i64 cents;
        auto key() const { return std::tie(firm, dest, product); }
        bool operator<(const Item& o) const { return key() < o.key(); }
    };
    std::vector<Item> items;
    for (const auto& r : ts.records) {
        if (r.country != country || r.year != year || r.value_cents <= 0) continue;
        items.push_back({r.firm, r.destination, r.product, r.value_cents});
    }
    std::sort(items.begin(), items.end());

    struct DestSet {
        std::vector<std::string_view> products;  // sorted unique
        i64 cents = 0;                           // destination total
    };
    std::vector<TpvAssignment> out;
    std::size_t i = 0;
    while (i < items.size()) {
        std::string_view firm = items[i].firm;
        std::vector<DestSet> dests;
        while (i < items.size() && items[i].firm == firm) {
            std::string_view dest = items[i].dest;
            DestSet ds;
            while (i < items.size() && items[i].firm == firm && items[i].dest == dest) {
                if (ds.products.empty() || ds.products.back() != items[i].product)
                    ds.products.push_back(items[i].product);
                ds.cents += items[i].cents;
                ++i;
            }
            dests.push_back(std::move(ds));
        }

        TpvAssignment a;
        a.country = std::string(country);
        a.firm = std::string(firm);
        a.year = year;
        a.destinations = i32(dests.size());
        if (dests.size() >= 2) {
            std::map<std::vector<std::string_view>, std::pair<i64, i64>> tally;  // count, cents
            for (const auto& ds : dests) {
                auto& [count, cents] = tally[ds.products];
                count += 1;
                cents += ds.cents;
            }
            const std::vector<std::string_view>* best = nullptr;
            i64 best_count = 0, best_cents = 0;
            for (const auto& [products, cv] : tally) {
                auto [count, cents] = cv;
                if (count < 2) continue;
                // map iteration is in ascending set order, so on full ties
                // the earlier (lexicographically smaller) set wins
                if (count > best_count || (count == best_count && cents > best_cents)) {
                    best = &products;
                    best_count = count;
                    best_cents = cents;
                }
            }
            if (best) {
                a.has_tpv = true;
                a.products.assign(best->begin(), best->end());
            }
        }
        out.push_back(std::move(a));
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Single-firm variant.
inline TpvAssignment typical_product_vector(const TransactionSet& ts,
                                            std::string_view country,
                                            std::string_view firm, i32 year) {
    TransactionSet sub;
    for (const auto& r : ts.records)
        if (r.country == country && r.firm == firm) sub.records.push_back(r);
    auto all = tpv_assignments(sub, country, year);
    if (all.empty()) {
        TpvAssignment a;
        a.country = std::string(country);
        a.firm = std::string(firm);
        a.year = year;
        return a;
    }
    return all.front();
}

struct KeptDroppedFlag {
    std::string firm;
    std::string product;
    i32 year = 0;  // observation year; status is relative to year + 1
    bool dropped = false;

    auto key() const { return std::tie(firm, product); }
    bool operator<(const KeptDroppedFlag& o) const { return key() < o.key(); }
};

// Flags every positive firm-product of year t as kept or dropped in t+1.
inline std::vector<KeptDroppedFlag> kept_dropped(const FirmProductPanel& panel,
                                                 std::string_view country, i32 t) {
    if (!std::binary_search(panel.years.begin(), panel.years.end(), t + 1))
        throw Error("year " + format_int(t + 1) + " not present in panel");
    YearBaskets now = year_baskets(panel, country, t);

    std::vector<std::pair<u32, u32>> next_pairs;
    for (const auto& c : panel.cells)
        if (c.country == now.country && c.year == t + 1)
            next_pairs.emplace_back(c.firm, c.product);
    std::sort(next_pairs.begin(), next_pairs.end());

    std::vector<KeptDroppedFlag> out;
    for (std::size_t fi = 0; fi < now.firms.size(); ++fi) {
        for (const auto& [product, cents] : now.baskets[fi]) {
            KeptDroppedFlag f;
            f.firm = panel.firms.name(now.firms[fi]);
            f.product = panel.products.name(product);
            f.year = t;
            f.dropped = !std::binary_search(next_pairs.begin(), next_pairs.end(),
                                            std::make_pair(now.firms[fi], product));
            out.push_back(std::move(f));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline const std::vector<std::string>& tpv_columns() {
    static const std::vector<std::string> cols = {"country", "firm_id", "year",
                                                  "destinations", "has_tpv", "products"};
    return cols;
}

inline void save_tpv(std::ostream& out, const std::vector<TpvAssignment>& rows) {
    CsvWriter w(out, tpv_columns());
    for (const auto& t : rows) {
        std::string joined;
        for (const auto& p : t.products) {
            if (!joined.empty()) joined.push_back(';');
            joined += p;
        }
        w.write_row({t.country, t.firm, format_int(t.year), format_int(t.destinations),
                     t.has_tpv ? "1" : "0", joined});
    }
}

inline std::vector<TpvAssignment> load_tpv(std::istream& in) {
    CsvReader reader(in);
    const std::size_t c_country = reader.column("country");
    const std::size_t c_firm = reader.column("firm_id");
    const std::size_t c_year = reader.column("year");
    const std::size_t c_nd = reader.column("destinations");
    const std::size_t c_has = reader.column("has_tpv");
    const std::size_t c_products = reader.column("products");
    std::vector<TpvAssignment> out;
    std::vector<std::string> row;
    while (reader.next(row)) {
        TpvAssignment t;
        t.country = std::string(trim(row[c_country]));
        t.firm = std::string(trim(row[c_firm]));
        i64 year, nd;
        if (!parse_int(row[c_year], year) || !parse_int(row[c_nd], nd) || nd < 0)
            throw Error("tpv line " + format_int(reader.line_no()) + ": bad integer");
        t.year = i32(year);
        t.destinations = i32(nd);
        std::string_view has = trim(row[c_has]);
        if (has != "0" && has != "1")
            throw Error("tpv line " + format_int(reader.line_no()) + ": has_tpv must be 0/1");
        t.has_tpv = has == "1";
        std::string_view joined = trim(row[c_products]);
        if (!joined.empty())
            for (auto& p : split(joined, ';')) t.products.push_back(std::move(p));
        if (t.has_tpv && t.products.empty())
            throw Error("tpv line " + format_int(reader.line_no()) +
                        ": has_tpv set but no products");
        out.push_back(std::move(t));
    }
    std::sort(out.begin(), out.end());
    return out;
}

struct Histogram {
    double lo = 0, hi = 1;
    std::vector<i64> counts;

    Histogram(double lo_, double hi_, int bins) : lo(lo_), hi(hi_), counts(bins, 0) {}
    void add(double v) {
        if (v < lo || v > hi) throw Error("histogram value out of range");
        int bin = int((v - lo) / (hi - lo) * double(counts.size()));
        if (bin == int(counts.size())) bin -= 1;  // right edge closes the last bin
        counts[std::size_t(bin)] += 1;
    }
    double edge(std::size_t i) const {
        return lo + (hi - lo) * double(i) / double(counts.size());
    }
};

}  // namespace corex
