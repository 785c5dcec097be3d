#pragma once
// Revealed comparative advantage per firm-product and its binarization into
// the specialization matrix. The >= 1 threshold is decided by exact integer
// cross-multiplication on cent values, so boundary cases never depend on
// floating-point rounding.

#include <algorithm>
#include <string>
#include <vector>

#include "corex/common.hpp"
#include "corex/panel.hpp"

namespace corex {

struct RcaEntry {
    u32 firm = 0;
    u32 product = 0;
    i64 cents = 0;      // firm-product export value
    double rca = 0;     // (X_ik / R_i) / (C_k / T)
    bool specialized = false;  // X_ik * T >= R_i * C_k, exact

    auto key() const { return std::tie(firm, product); }
    bool operator<(const RcaEntry& o) const { return key() < o.key(); }
};

struct RcaMatrix {
    std::string country;
    i32 year = 0;
    std::vector<RcaEntry> entries;  // sorted by (firm, product); positive cells only
};

// RCA of firm i in product k: the firm's export share in k relative to the
// population share of k, computed over one country-year. Entries exist
// exactly where the panel has a positive cell.
inline RcaMatrix compute_rca(const FirmProductPanel& panel, std::string_view country,
                             i32 year) {
    YearBaskets yb = year_baskets(panel, country, year);

    std::vector<i64> product_total(panel.products.size(), 0);
    std::vector<i64> firm_total(yb.firms.size(), 0);
    i64 grand_total = 0;
    for (std::size_t fi = 0; fi < yb.firms.size(); ++fi) {
        for (const auto& [product, cents] : yb.baskets[fi]) {
            product_total[product] += cents;
            firm_total[fi] += cents;
        }
        grand_total += firm_total[fi];
    }

    RcaMatrix out;
    out.country = std::string(country);
    out.year = year;
    for (std::size_t fi = 0; fi < yb.firms.size(); ++fi) {
        for (const auto& [product, cents] : yb.baskets[fi]) {
            RcaEntry e;
            e.firm = yb.firms[fi];
            e.product = product;
            e.cents = cents;
            e.rca = (double(cents) * double(grand_total)) /
                    (double(firm_total[fi]) * double(product_total[product]));
            e.specialized =
                i128(cents) * i128(grand_total) >=
                i128(firm_total[fi]) * i128(product_total[product]);
            out.entries.push_back(e);
        }
    }
    std::sort(out.entries.begin(), out.entries.end());
    return out;
}

struct SpecializationMatrix {
    std::string country;
    i32 year = 0;
    std::vector<std::pair<u32, u32>> pairs;  // (firm, product), sorted
};

// Keeps the pairs with RCA >= 1; the boundary is included.
inline SpecializationMatrix binarize(const RcaMatrix& rca) {
    SpecializationMatrix out;
    out.country = rca.country;
    out.year = rca.year;
    for (const auto& e : rca.entries)
        if (e.specialized) out.pairs.emplace_back(e.firm, e.product);
    return out;
}

}  // namespace corex
