#pragma once
// Coreness: the export-weighted mean proximity of a product to the rest of
// the same firm's basket, self-similarity included. Basket weights are
// reduced by their gcd before any floating-point arithmetic, so uniformly
// rescaling a firm's exports (where the rescaled values are again exact
// cents) reproduces bit-identical coreness and share values.

#include <algorithm>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "corex/common.hpp"
#include "corex/csv.hpp"
#include "corex/panel.hpp"
#include "corex/parallel.hpp"
#include "corex/proximity.hpp"

namespace corex {

struct CorenessRow {
    std::string firm;
    std::string product;
    double coreness = 0;
    i32 np = 0;        // basket size of the firm-year
    double share = 0;  // within-firm export share of the product
    bool off_network = false;  // product absent from the proximity network

    auto key() const { return std::tie(firm, product); }
    bool operator<(const CorenessRow& o) const { return key() < o.key(); }
};

struct CorenessTable {
    std::string country;
    i32 year = 0;
    std::vector<CorenessRow> rows;  // sorted by (firm, product)
};

// Computes coreness for every positive firm-product cell of one
// country-year. Products missing from the network node list contribute
// nothing to other products and count only their self-term; they are
// flagged off_network. Parallel over firms; each firm writes its own
// preallocated slots, so output is independent of thread count.
inline CorenessTable coreness_table(const FirmProductPanel& panel,
                                    const ProximityNetwork& net, std::string_view country,
                                    i32 year, int threads = 1) {
    if (net.year != year || net.country != country)
        throw Error("network is for " + net.country + "/" + format_int(net.year) +
                    ", not " + std::string(country) + "/" + format_int(year));
    YearBaskets yb = year_baskets(panel, country, year);

    std::vector<std::size_t> offset(yb.firms.size() + 1, 0);
    for (std::size_t fi = 0; fi < yb.firms.size(); ++fi)
        offset[fi + 1] = offset[fi] + yb.baskets[fi].size();

    CorenessTable table;
    table.country = std::string(country);
    table.year = year;
    table.rows.resize(offset.back());

    for_each_block(yb.firms.size(), threads, [&](std::size_t, std::size_t lo,
                                                 std::size_t hi) {
        std::vector<int> nodes;
        std::vector<i64> weights;
        for (std::size_t fi = lo; fi < hi; ++fi) {
            const auto& basket = yb.baskets[fi];
            const std::size_t m = basket.size();
            nodes.clear();
            weights.clear();
            i64 g = 0;
            for (const auto& [product, cents] : basket) {
                nodes.push_back(net.node_index(panel.products.name(product)));
                weights.push_back(cents);
                g = gcd_i64(g, cents);
            }
            i64 total = 0;
            for (auto& w : weights) {
                w /= g;
                total += w;
            }
            for (std::size_t k = 0; k < m; ++k) {
                double num = 0;
                for (std::size_t kp = 0; kp < m; ++kp) {
                    double jw;
                    if (k == kp)
                        jw = 1.0;
                    else if (nodes[k] < 0 || nodes[kp] < 0)
                        jw = 0.0;
                    else
                        jw = net.j(u32(nodes[k]), u32(nodes[kp]));
                    num += jw * double(weights[kp]);
                }
                CorenessRow& row = table.rows[offset[fi] + k];
                row.firm = panel.firms.name(yb.firms[fi]);
                row.product = panel.products.name(basket[k].first);
                row.coreness = num / double(total);
                row.np = i32(m);
                row.share = double(weights[k]) / double(total);
                row.off_network = nodes[k] < 0;
            }
        }
    });
    return table;
}

// ---------------------------------------------------------------------------
// Serialization.

inline const std::vector<std::string>& coreness_columns() {
    static const std::vector<std::string> cols = {"country", "firm_id",  "hs6",
                                                  "year",    "coreness", "np",
                                                  "share",   "off_network"};
    return cols;
}

inline void save_coreness(std::ostream& out, const CorenessTable& t) {
    CsvWriter w(out, coreness_columns());
    for (const auto& r : t.rows) {
        w.write_row({t.country, r.firm, r.product, format_int(t.year),
                     format_g17(r.coreness), format_int(r.np), format_g17(r.share),
                     r.off_network ? "1" : "0"});
    }
}

inline CorenessTable load_coreness(std::istream& in) {
    CsvReader reader(in);
    const std::size_t c_country = reader.column("country");
    const std::size_t c_firm = reader.column("firm_id");
    const std::size_t c_hs6 = reader.column("hs6");
    const std::size_t c_year = reader.column("year");
    const std::size_t c_core = reader.column("coreness");
    const std::size_t c_np = reader.column("np");
    const std::size_t c_share = reader.column("share");
    const std::size_t c_off = reader.column("off_network");

    CorenessTable t;
    std::vector<std::string> row;
    bool first = true;
    while (reader.next(row)) {
        if (row.size() != coreness_columns().size())
            throw Error("coreness line " + format_int(reader.line_no()) +
                        ": wrong field count");
        i64 year, np;
        CorenessRow r;
        r.firm = std::string(trim(row[c_firm]));
        r.product = std::string(trim(row[c_hs6]));
        if (!parse_int(row[c_year], year) || !parse_int(row[c_np], np) || np <= 0 ||
            !parse_double(row[c_core], r.coreness) ||
            !parse_double(row[c_share], r.share))
            throw Error("coreness line " + format_int(reader.line_no()) + ": bad value");
        std::string_view off = trim(row[c_off]);
        if (off != "0" && off != "1")
            throw Error("coreness line " + format_int(reader.line_no()) +
                        ": bad off_network flag");
        r.off_network = off == "1";
        r.np = i32(np);
        if (first) {
            t.country = std::string(trim(row[c_country]));
            t.year = i32(year);
            first = false;
        } else if (t.country != trim(row[c_country]) || t.year != i32(year)) {
            throw Error("coreness file mixes country-years");
        }
        t.rows.push_back(std::move(r));
    }
    if (first) throw Error("empty coreness file");
    std::sort(t.rows.begin(), t.rows.end());
    return t;
}

}  // namespace corex
