#pragma once
// Product complexity: ingestion of an external per-year PCI file, averaging
// across a year window, and quartile assignment over a product universe.

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "corex/common.hpp"
#include "corex/csv.hpp"

namespace corex {

struct ComplexityTable {
    struct Row {
        std::string product;
        double pci_mean = 0;
        int years_covered = 0;
        int quartile = 0;  // 1..4 once assigned; 0 = unassigned

        bool operator<(const Row& o) const { return product < o.product; }
    };
    std::vector<Row> rows;                 // sorted by product
    std::vector<std::string> flagged;      // products seen but with no usable value
    std::vector<i32> years_averaged;

    const Row* find(std::string_view product) const {
        auto it = std::lower_bound(rows.begin(), rows.end(), product,
                                   [](const Row& r, std::string_view p) {
                                       return r.product < p;
                                   });
        if (it == rows.end() || it->product != product) return nullptr;
        return &*it;
    }
};

// Reads (product, year, pci) rows and averages pci per product over the
// requested years (empty = all years present). An empty or "NA" pci field
// is a missing observation; a product with no usable observation in the
// window is excluded from the table and listed in `flagged`.
inline ComplexityTable load_pci(std::istream& in, const std::vector<i32>& years) {
    CsvReader reader(in);
    const std::size_t c_product = reader.column("product");
    const std::size_t c_year = reader.column("year");
    const std::size_t c_pci = reader.column("pci");

    std::map<std::pair<std::string, i32>, bool> seen;
    std::map<std::string, std::pair<double, int>> acc;  // sum, count over window
    std::map<std::string, bool> any_product;
    std::vector<std::string> duplicates;
    std::vector<std::string> row;
    while (reader.next(row)) {
        if (row.size() < 3)
            throw Error("pci line " + format_int(reader.line_no()) + ": wrong field count");
        std::string product(trim(row[c_product]));
        i64 year;
        if (product.empty() || !parse_int(row[c_year], year))
            throw Error("pci line " + format_int(reader.line_no()) + ": bad product or year");
        if (!seen.emplace(std::make_pair(product, i32(year)), true).second)
            duplicates.push_back(product + "/" + format_int(year));
        any_product[product] = true;
        if (!years.empty() &&
            std::find(years.begin(), years.end(), i32(year)) == years.end())
            continue;
        std::string_view pci_field = trim(row[c_pci]);
        if (pci_field.empty() || pci_field == "NA") continue;
        double pci;
        if (!parse_double(pci_field, pci))
            throw Error("pci line " + format_int(reader.line_no()) + ": bad pci value");
        auto& [sum, count] = acc[product];
        sum += pci;
        count += 1;
    }
    if (!duplicates.empty()) {
        std::string msg = "duplicate pci rows:";
        for (const auto& d : duplicates) msg += " " + d;
        throw Error(msg);
    }

    ComplexityTable table;
    table.years_averaged = years;
    for (const auto& [product, sc] : acc) {
        ComplexityTable::Row r;
        r.product = product;
        r.pci_mean = sc.first / double(sc.second);
        r.years_covered = sc.second;
        table.rows.push_back(std::move(r));
    }
    for (const auto& [product, _] : any_product)
        if (!acc.count(product)) table.flagged.push_back(product);
    return table;
}

// Assigns complexity quartiles over the covered part of `universe` (sorted
// or not; duplicates ignored). Cut points are linear-interpolation
// quartiles of the covered pci distribution; ties at a cut point fall to
// the lower quartile. Rows outside the universe are left unassigned.
inline void quartile_assign(ComplexityTable& table, std::vector<std::string> universe) {
    std::sort(universe.begin(), universe.end());
    universe.erase(std::unique(universe.begin(), universe.end()), universe.end());
    if (universe.empty()) throw Error("empty product universe");

    std::vector<double> covered;
    for (const auto& p : universe) {
        const auto* row = table.find(p);
        if (row) covered.push_back(row->pci_mean);
    }
    if (covered.size() < 4) throw Error("fewer than 4 covered products");
    std::sort(covered.begin(), covered.end());
    const double cut[3] = {quantile_sorted(covered, 0.25), quantile_sorted(covered, 0.50),
                           quantile_sorted(covered, 0.75)};

    for (auto& row : table.rows) {
        row.quartile = 0;
        if (!std::binary_search(universe.begin(), universe.end(), row.product)) continue;
        int q = 4;
        for (int c = 0; c < 3; ++c)
            if (row.pci_mean <= cut[c]) { q = c + 1; break; }
        row.quartile = q;
    }
}

// ---------------------------------------------------------------------------
// Serialization of the averaged table.

inline const std::vector<std::string>& complexity_columns() {
    static const std::vector<std::string> cols = {"product", "pci_mean", "years",
                                                  "quartile"};
    return cols;
}

inline void save_complexity(std::ostream& out, const ComplexityTable& table) {
    CsvWriter w(out, complexity_columns());
    for (const auto& r : table.rows)
        w.write_row({r.product, format_g17(r.pci_mean), format_int(r.years_covered),
                     format_int(r.quartile)});
}

inline ComplexityTable load_complexity(std::istream& in) {
    CsvReader reader(in);
    const std::size_t c_product = reader.column("product");
    const std::size_t c_mean = reader.column("pci_mean");
    const std::size_t c_years = reader.column("years");
    const std::size_t c_q = reader.column("quartile");

    ComplexityTable table;
    std::vector<std::string> row;
    while (reader.next(row)) {
        if (row.size() != complexity_columns().size())
            throw Error("complexity line " + format_int(reader.line_no()) +
                        ": wrong field count");
        ComplexityTable::Row r;
        r.product = std::string(trim(row[c_product]));
        i64 years, quartile;
        if (!parse_double(row[c_mean], r.pci_mean) || !parse_int(row[c_years], years) ||
            !parse_int(row[c_q], quartile) || quartile < 0 || quartile > 4)
            throw Error("complexity line " + format_int(reader.line_no()) + ": bad value");
        r.years_covered = int(years);
        r.quartile = int(quartile);
        table.rows.push_back(std::move(r));
    }
    std::sort(table.rows.begin(), table.rows.end());
    for (std::size_t i = 1; i < table.rows.size(); ++i)
        if (table.rows[i].product == table.rows[i - 1].product)
            throw Error("duplicate complexity product " + table.rows[i].product);
    return table;
}

}  // namespace corex
