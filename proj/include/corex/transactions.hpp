#pragma once
// Transaction-level records: parsing from delimited text, re-export
// filtering, and canonical serialization. Malformed rows are counted and
// reported with line numbers, never silently dropped.

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "corex/common.hpp"
#include "corex/csv.hpp"

namespace corex {

struct TransactionRecord {
    std::string country;      // namespace for firm ids
    std::string firm;         // exporter tax id, opaque
    std::string product;      // 6-digit HS code
    std::string destination;  // ISO country code
    int year = 0;
    int month = 0;            // 1..12
    i64 value_cents = 0;      // >= 0
    bool re_export = false;

    auto key() const {
        return std::tie(country, firm, product, year, month, destination,
                        value_cents, re_export);
    }
    bool operator<(const TransactionRecord& o) const { return key() < o.key(); }
    bool operator==(const TransactionRecord& o) const { return key() == o.key(); }
};

struct RejectedRow {
    i64 line = 0;
    std::string reason;
};

struct ParseReport {
    i64 rows_read = 0;
    i64 rows_ok = 0;
    i64 rows_rejected = 0;
    std::vector<RejectedRow> rejects;  // capped detail, counts are complete
    static constexpr std::size_t kMaxStoredRejects = 1000;

    void reject(i64 line, std::string reason) {
        ++rows_rejected;
        if (rejects.size() < kMaxStoredRejects)
            rejects.push_back({line, std::move(reason)});
    }
};

struct TransactionSet {
    std::vector<TransactionRecord> records;

    void sort_canonical() { std::sort(records.begin(), records.end()); }
    std::size_t size() const { return records.size(); }
};

// Column mapping for transaction inputs. `rename` maps the canonical name
// (left) to the name used in the file.
struct TransactionSchema {
    char delimiter = ',';
    std::map<std::string, std::string> rename;
    std::string default_country = "UNK";  // used when no country column exists

    std::string file_column(const std::string& canonical) const {
        auto it = rename.find(canonical);
        return it == rename.end() ? canonical : it->second;
    }
};

// Parses one stream of transaction rows. Mandatory columns: firm_id, hs6,
// destination, year, month, value_usd, re_export. A `country` column is
// optional; absent, every record gets schema.default_country.
inline TransactionSet parse_transactions(std::istream& in, const TransactionSchema& schema,
                                         ParseReport& report) {
    CsvReader reader(in, schema.delimiter);
    const std::size_t c_firm = reader.column(schema.file_column("firm_id"));
    const std::size_t c_hs6 = reader.column(schema.file_column("hs6"));
    const std::size_t c_dest = reader.column(schema.file_column("destination"));
    const std::size_t c_year = reader.column(schema.file_column("year"));
    const std::size_t c_month = reader.column(schema.file_column("month"));
    const std::size_t c_value = reader.column(schema.file_column("value_usd"));
    const std::size_t c_reexp = reader.column(schema.file_column("re_export"));
    const std::string country_col = schema.file_column("country");
    const bool has_country = reader.has_column(country_col);
    const std::size_t c_country = has_country ? reader.column(country_col) : 0;

    std::size_t width = reader.columns().size();
    TransactionSet out;
    std::vector<std::string> row;
    while (reader.next(row)) {
        ++report.rows_read;
        if (row.size() != width) {
            report.reject(reader.line_no(), "wrong field count");
            continue;
        }
        TransactionRecord rec;
        rec.country = has_country ? std::string(trim(row[c_country])) : schema.default_country;
        rec.firm = std::string(trim(row[c_firm]));
        rec.product = std::string(trim(row[c_hs6]));
        rec.destination = std::string(trim(row[c_dest]));
        if (rec.firm.empty()) { report.reject(reader.line_no(), "empty firm_id"); continue; }
        if (!is_digits(rec.product) || rec.product.size() != 6) {
            report.reject(reader.line_no(), "product is not a 6-digit code");
            continue;
        }
        if (rec.destination.empty()) { report.reject(reader.line_no(), "empty destination"); continue; }
        if (rec.country.empty()) { report.reject(reader.line_no(), "empty country"); continue; }
        i64 year, month;
        if (!parse_int(row[c_year], year)) { report.reject(reader.line_no(), "bad year"); continue; }
        if (!parse_int(row[c_month], month) || month < 1 || month > 12) {
            report.reject(reader.line_no(), "month out of range");
            continue;
        }
        if (!parse_money_cents(trim(row[c_value]), rec.value_cents) || rec.value_cents < 0) {
            report.reject(reader.line_no(), "bad value");
            continue;
        }
        std::string_view re = trim(row[c_reexp]);
        if (re == "0") rec.re_export = false;
        else if (re == "1") rec.re_export = true;
        else { report.reject(reader.line_no(), "bad re_export flag"); continue; }
        rec.year = int(year);
        rec.month = int(month);
        out.records.push_back(std::move(rec));
        ++report.rows_ok;
    }
    return out;
}

// Keeps exactly the records with re_export == false. Idempotent.
inline TransactionSet filter_re_exports(const TransactionSet& ts, i64* removed = nullptr) {
    TransactionSet out;
    out.records.reserve(ts.records.size());
    i64 dropped = 0;
    for (const auto& r : ts.records) {
        if (r.re_export) { ++dropped; continue; }
        out.records.push_back(r);
    }
    if (removed) *removed = dropped;
    return out;
}

inline const std::vector<std::string>& transaction_columns() {
    static const std::vector<std::string> cols = {
        "country", "firm_id", "hs6", "destination", "year", "month", "value_usd", "re_export"};
    return cols;
}

inline void save_transactions(std::ostream& out, const TransactionSet& ts) {
    CsvWriter w(out, transaction_columns());
    for (const auto& r : ts.records) {
        w.write_row({r.country, r.firm, r.product, r.destination, format_int(r.year),
                     format_int(r.month), format_money_cents(r.value_cents),
                     r.re_export ? "1" : "0"});
    }
}

inline TransactionSet load_transactions(std::istream& in, ParseReport& report) {
    return parse_transactions(in, TransactionSchema{}, report);
}

}  // namespace corex
