#pragma once
// Firm-product panel: aggregation of transaction records to annual or
// quarterly cells, firm/product marginals, and quarterly headline series.
// All monetary accumulation is in integer cents, and cells are merged after
// a canonical sort, so results are independent of input row order and of
// any upstream sharding.

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "corex/common.hpp"
#include "corex/csv.hpp"
#include "corex/transactions.hpp"

namespace corex {

// Sorted, deduplicated name pool. Ids are stable ranks in lexicographic
// order, so interning the same name set always yields the same ids.
struct NameTable {
    std::vector<std::string> names;

    void build(std::vector<std::string_view> all) {
        std::sort(all.begin(), all.end());
        all.erase(std::unique(all.begin(), all.end()), all.end());
        names.assign(all.begin(), all.end());
    }
    u32 id(std::string_view s) const {
        auto it = std::lower_bound(names.begin(), names.end(), s);
        if (it == names.end() || *it != s) throw Error("unknown name: " + std::string(s));
        return u32(it - names.begin());
    }
    bool contains(std::string_view s) const {
        auto it = std::lower_bound(names.begin(), names.end(), s);
        return it != names.end() && *it == s;
    }
    const std::string& name(u32 i) const { return names.at(i); }
    std::size_t size() const { return names.size(); }
};

struct PanelCell {
    u32 country = 0;
    u32 firm = 0;
    u32 product = 0;
    i32 year = 0;
    i32 quarter = 0;  // 0 = annual cell
    i64 cents = 0;    // strictly positive in a finalized panel

    auto key() const { return std::tie(country, firm, product, year, quarter); }
    bool operator<(const PanelCell& o) const { return key() < o.key(); }
};

struct FirmMarginal {
    u32 country = 0;
    u32 firm = 0;
    i32 year = 0;
    i32 quarter = 0;
    i64 total_cents = 0;
    i32 np = 0;  // distinct products with positive value
    i32 nd = 0;  // distinct destinations with positive value

    auto key() const { return std::tie(country, firm, year, quarter); }
    bool operator<(const FirmMarginal& o) const { return key() < o.key(); }
};

struct ProductMarginal {
    u32 country = 0;
    u32 product = 0;
    i32 year = 0;
    i32 quarter = 0;
    i64 total_cents = 0;
    i32 n_exporters = 0;

    auto key() const { return std::tie(country, product, year, quarter); }
    bool operator<(const ProductMarginal& o) const { return key() < o.key(); }
};

struct FirmProductPanel {
    bool quarterly = false;
    NameTable countries;
    NameTable firms;
    NameTable products;
    std::vector<i32> years;                        // sorted distinct
    std::vector<PanelCell> cells;                  // sorted by key
    std::vector<FirmMarginal> firm_marginals;      // sorted by key
    std::vector<ProductMarginal> product_marginals;  // sorted by key

    const FirmMarginal* find_firm(u32 country, u32 firm, i32 year, i32 quarter = 0) const {
        FirmMarginal probe;
        probe.country = country; probe.firm = firm; probe.year = year; probe.quarter = quarter;
        auto it = std::lower_bound(firm_marginals.begin(), firm_marginals.end(), probe);
        if (it == firm_marginals.end() || !(it->key() == probe.key())) return nullptr;
        return &*it;
    }
    const ProductMarginal* find_product(u32 country, u32 product, i32 year, i32 quarter = 0) const {
        ProductMarginal probe;
        probe.country = country; probe.product = product; probe.year = year; probe.quarter = quarter;
        auto it = std::lower_bound(product_marginals.begin(), product_marginals.end(), probe);
        if (it == product_marginals.end() || !(it->key() == probe.key())) return nullptr;
        return &*it;
    }
    const PanelCell* find_cell(u32 country, u32 firm, u32 product, i32 year,
                               i32 quarter = 0) const {
        PanelCell probe;
        probe.country = country; probe.firm = firm; probe.product = product;
        probe.year = year; probe.quarter = quarter;
        auto it = std::lower_bound(cells.begin(), cells.end(), probe);
        if (it == cells.end() || !(it->key() == probe.key())) return nullptr;
        return &*it;
    }
};

namespace detail {

// Recomputes years, firm marginals (totals and NP), and product marginals
// from the sorted positive cells. ND comes from `nd_lookup` (may be empty
// when destination detail is unavailable; those marginals keep nd as given).
inline void finalize_panel(FirmProductPanel& p,
                           const std::map<std::tuple<u32, u32, i32, i32>, i32>& nd_lookup) {
    p.years.clear();
    p.firm_marginals.clear();
    p.product_marginals.clear();
    for (const auto& c : p.cells) {
        if (c.cents <= 0) throw Error("panel cell with non-positive value");
        if (p.years.empty() || p.years.back() != c.year) p.years.push_back(c.year);
    }
    std::sort(p.years.begin(), p.years.end());
    p.years.erase(std::unique(p.years.begin(), p.years.end()), p.years.end());

    // Cells are product-major within a firm, so periods interleave; build
    // singleton marginals and merge after sorting by (country, firm, period).
    std::vector<FirmMarginal> fm;
    fm.reserve(p.cells.size());
    for (const auto& c : p.cells) {
        FirmMarginal m;
        m.country = c.country; m.firm = c.firm; m.year = c.year; m.quarter = c.quarter;
        m.total_cents = c.cents; m.np = 1;
        fm.push_back(m);
    }
    std::sort(fm.begin(), fm.end());
    for (const auto& m : fm) {
        if (!p.firm_marginals.empty()) {
            auto& back = p.firm_marginals.back();
            if (back.key() == m.key()) {
                back.total_cents += m.total_cents;
                back.np += 1;
                continue;
            }
        }
        p.firm_marginals.push_back(m);
    }
    for (auto& m : p.firm_marginals) {
        auto it = nd_lookup.find({m.country, m.firm, m.year, m.quarter});
        if (it != nd_lookup.end()) m.nd = it->second;
    }

    std::vector<ProductMarginal> pm;
    pm.reserve(p.cells.size());
    for (const auto& c : p.cells) {
        ProductMarginal m;
        m.country = c.country; m.product = c.product; m.year = c.year; m.quarter = c.quarter;
        m.total_cents = c.cents; m.n_exporters = 1;
        pm.push_back(m);
    }
    std::sort(pm.begin(), pm.end());
    for (const auto& m : pm) {
        if (!p.product_marginals.empty()) {
            auto& back = p.product_marginals.back();
            if (back.key() == m.key()) {
                back.total_cents += m.total_cents;
                back.n_exporters += 1;
                continue;
            }
        }
        p.product_marginals.push_back(m);
    }
}

}  // namespace detail

// Aggregates filtered transactions to an annual (quarterly=false) or
// quarterly (quarterly=true) panel. Zero-value transactions contribute to
// nothing: cells, marginals, and destination sets all count positive flows
// only, and a firm-product cell whose records sum to zero is absent.
inline FirmProductPanel aggregate_panel(const TransactionSet& ts, bool quarterly) {
    FirmProductPanel p;
    p.quarterly = quarterly;

    std::vector<std::string_view> cs, fs, ps;
    cs.reserve(ts.records.size());
    fs.reserve(ts.records.size());
    ps.reserve(ts.records.size());
    for (const auto& r : ts.records) {
        cs.push_back(r.country);
        fs.push_back(r.firm);
        ps.push_back(r.product);
    }
    p.countries.build(std::move(cs));
    p.firms.build(std::move(fs));
    p.products.build(std::move(ps));

    std::vector<PanelCell> raw;
    raw.reserve(ts.records.size());
    // (country, firm, year, quarter) -> distinct destination names
    std::map<std::tuple<u32, u32, i32, i32>, std::vector<std::string_view>> dests;
    for (const auto& r : ts.records) {
        if (r.value_cents <= 0) continue;
        PanelCell c;
        c.country = p.countries.id(r.country);
        c.firm = p.firms.id(r.firm);
        c.product = p.products.id(r.product);
        c.year = r.year;
        c.quarter = quarterly ? (r.month - 1) / 3 + 1 : 0;
        c.cents = r.value_cents;
        dests[{c.country, c.firm, c.year, c.quarter}].push_back(r.destination);
        raw.push_back(c);
    }
    std::sort(raw.begin(), raw.end());
    for (const auto& c : raw) {
        if (!p.cells.empty() && p.cells.back().key() == c.key())
            p.cells.back().cents += c.cents;
        else
            p.cells.push_back(c);
    }

    std::map<std::tuple<u32, u32, i32, i32>, i32> nd;
    for (auto& [k, v] : dests) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        nd[k] = i32(v.size());
    }
    detail::finalize_panel(p, nd);
    return p;
}

struct QuarterRow {
    std::string country;
    i32 year = 0;
    i32 quarter = 0;  // 1..4
    i64 total_cents = 0;
    i64 exporters = 0;      // distinct firms with positive flow
    i64 firm_products = 0;  // distinct (firm, product) pairs with positive flow

    auto key() const { return std::tie(country, year, quarter); }
    bool operator<(const QuarterRow& o) const { return key() < o.key(); }
};

// Headline quarterly series per country: totals and distinct counts over
// positive flows.
inline std::vector<QuarterRow> quarterly_aggregates(const TransactionSet& ts) {
    struct Item {
        std::string_view country, firm, product;
        i32 year, quarter;
        i64 cents;
        auto key() const { return std::tie(country, year, quarter, firm, product); }
        bool operator<(const Item& o) const { return key() < o.key(); }
    };
    std::vector<Item> items;
    items.reserve(ts.records.size());
    for (const auto& r : ts.records) {
        if (r.value_cents <= 0) continue;
        items.push_back({r.country, r.firm, r.product, r.year, (r.month - 1) / 3 + 1,
                         r.value_cents});
    }
    std::sort(items.begin(), items.end());

    std::vector<QuarterRow> out;
    std::string_view cur_firm, cur_product;
    for (const auto& it : items) {
        if (out.empty() || out.back().country != it.country || out.back().year != it.year ||
            out.back().quarter != it.quarter) {
            QuarterRow row;
            row.country = std::string(it.country);
            row.year = it.year;
            row.quarter = it.quarter;
            out.push_back(row);
            cur_firm = {};
            cur_product = {};
        }
        auto& row = out.back();
        row.total_cents += it.cents;
        if (cur_firm != it.firm) {
            ++row.exporters;
            cur_firm = it.firm;
            cur_product = {};
        }
        if (cur_product != it.product) {
            ++row.firm_products;
            cur_product = it.product;
        }
    }
    return out;
}

// Per-firm baskets for one country-year of an annual panel. Firms appear in
// id order; each basket lists (product id, cents) in product-id order.
struct YearBaskets {
    u32 country = 0;
    i32 year = 0;
    std::vector<u32> firms;
    std::vector<std::vector<std::pair<u32, i64>>> baskets;  // parallel to firms
};

inline YearBaskets year_baskets(const FirmProductPanel& p, std::string_view country,
                                i32 year) {
    if (p.quarterly) throw Error("annual panel required");
    if (!p.countries.contains(country))
        throw Error("country " + std::string(country) + " not present in panel");
    YearBaskets out;
    out.country = p.countries.id(country);
    out.year = year;
    for (const auto& c : p.cells) {
        if (c.country != out.country || c.year != year) continue;
        if (out.firms.empty() || out.firms.back() != c.firm) {
            out.firms.push_back(c.firm);
            out.baskets.emplace_back();
        }
        out.baskets.back().emplace_back(c.product, c.cents);
    }
    if (out.firms.empty())
        throw Error("no data for country " + std::string(country) + ", year " +
                    format_int(year));
    for (auto& b : out.baskets) std::sort(b.begin(), b.end());
    return out;
}

// ---------------------------------------------------------------------------
// Serialization. One row per positive cell; firm_nd repeats the firm-period
// destination count on every row of that firm-period and is validated for
// consistency on load.

inline const std::vector<std::string>& panel_columns() {
    static const std::vector<std::string> cols = {"country", "firm_id", "hs6", "year",
                                                  "quarter", "value_usd", "firm_nd"};
    return cols;
}

inline void save_panel(std::ostream& out, const FirmProductPanel& p) {
    CsvWriter w(out, panel_columns());
    for (const auto& c : p.cells) {
        const FirmMarginal* m = p.find_firm(c.country, c.firm, c.year, c.quarter);
        w.write_row({p.countries.name(c.country), p.firms.name(c.firm),
                     p.products.name(c.product), format_int(c.year), format_int(c.quarter),
                     format_money_cents(c.cents), format_int(m ? m->nd : 0)});
    }
}

inline FirmProductPanel load_panel(std::istream& in) {
    CsvReader reader(in);
    const std::size_t c_country = reader.column("country");
    const std::size_t c_firm = reader.column("firm_id");
    const std::size_t c_hs6 = reader.column("hs6");
    const std::size_t c_year = reader.column("year");
    const std::size_t c_quarter = reader.column("quarter");
    const std::size_t c_value = reader.column("value_usd");
    const std::size_t c_nd = reader.column("firm_nd");

    struct Raw {
        std::string country, firm, product;
        i32 year, quarter;
        i64 cents;
        i32 nd;
    };
    std::vector<Raw> raws;
    std::vector<std::string> row;
    bool any_quarterly = false;
    while (reader.next(row)) {
        if (row.size() != panel_columns().size())
            throw Error("panel line " + format_int(reader.line_no()) + ": wrong field count");
        Raw r;
        r.country = std::string(trim(row[c_country]));
        r.firm = std::string(trim(row[c_firm]));
        r.product = std::string(trim(row[c_hs6]));
        i64 year, quarter, nd;
        if (!parse_int(row[c_year], year) || !parse_int(row[c_quarter], quarter) ||
            quarter < 0 || quarter > 4)
            throw Error("panel line " + format_int(reader.line_no()) + ": bad period");
        if (!parse_money_cents(trim(row[c_value]), r.cents) || r.cents <= 0)
            throw Error("panel line " + format_int(reader.line_no()) +
                        ": value must be positive");
        if (!parse_int(row[c_nd], nd) || nd < 0)
            throw Error("panel line " + format_int(reader.line_no()) + ": bad firm_nd");
        r.year = i32(year);
        r.quarter = i32(quarter);
        r.nd = i32(nd);
        if (r.quarter > 0) any_quarterly = true;
        raws.push_back(std::move(r));
    }
    for (const auto& r : raws)
        if (any_quarterly && r.quarter == 0)
            throw Error("panel mixes annual and quarterly rows");

    FirmProductPanel p;
    p.quarterly = any_quarterly;
    std::vector<std::string_view> cs, fs, ps;
    for (const auto& r : raws) {
        cs.push_back(r.country);
        fs.push_back(r.firm);
        ps.push_back(r.product);
    }
    p.countries.build(std::move(cs));
    p.firms.build(std::move(fs));
    p.products.build(std::move(ps));

    std::map<std::tuple<u32, u32, i32, i32>, i32> nd;
    for (const auto& r : raws) {
        PanelCell c;
        c.country = p.countries.id(r.country);
        c.firm = p.firms.id(r.firm);
        c.product = p.products.id(r.product);
        c.year = r.year;
        c.quarter = r.quarter;
        c.cents = r.cents;
        auto [it, inserted] = nd.try_emplace({c.country, c.firm, c.year, c.quarter}, r.nd);
        if (!inserted && it->second != r.nd)
            throw Error("inconsistent firm_nd for firm " + r.firm + " in " +
                        format_int(r.year));
        p.cells.push_back(c);
    }
    std::sort(p.cells.begin(), p.cells.end());
    for (std::size_t i = 1; i < p.cells.size(); ++i)
        if (p.cells[i].key() == p.cells[i - 1].key())
            throw Error("duplicate panel cell for firm " + p.firms.name(p.cells[i].firm) +
                        ", product " + p.products.name(p.cells[i].product));
    detail::finalize_panel(p, nd);
    return p;
}

}  // namespace corex
