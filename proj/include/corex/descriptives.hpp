#pragma once
// Firm-year summaries and the descriptive tables built from them:
// diversification bins, size quartiles, and the binned exponential fit of
// product count against firm size.

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "corex/common.hpp"
#include "corex/panel.hpp"

namespace corex {

struct FirmSummary {
    std::string country;
    std::string firm;
    i32 year = 0;
    i64 total_cents = 0;
    double log_size = 0;  // ln of total exports in USD
    i32 np = 0;
    i32 nd = 0;
    int size_quartile = 0;    // 1..4; 0 when the country-year has < 4 firms
    std::string div_bin;      // one of 1,2,3,4,5-10,>10

    auto key() const { return std::tie(country, year, firm); }
    bool operator<(const FirmSummary& o) const { return key() < o.key(); }
};

inline const std::vector<std::string>& diversification_bins() {
    static const std::vector<std::string> bins = {"1", "2", "3", "4", "5-10", ">10"};
    return bins;
}

inline std::string diversification_bin(i32 np) {
    if (np <= 4) return format_int(np);
    if (np <= 10) return "5-10";
    return ">10";
}

// Fills size_quartile per country-year from the log-size distribution.
// Cut points are linear-interpolation quantiles at 1/4, 1/2, 3/4; a firm
// goes to the lowest quartile whose cut point is >= its log size (ties at a
// cut point fall to the lower quartile). Groups with fewer than 4 firms get
// quartile 0 (unassigned).
inline void assign_size_quartiles(std::vector<FirmSummary>& summaries) {
    std::map<std::pair<std::string, i32>, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < summaries.size(); ++i)
        groups[{summaries[i].country, summaries[i].year}].push_back(i);
    for (auto& [key, idx] : groups) {
        if (idx.size() < 4) {
            for (auto i : idx) summaries[i].size_quartile = 0;
            continue;
        }
        std::vector<double> logs;
        logs.reserve(idx.size());
        for (auto i : idx) logs.push_back(summaries[i].log_size);
        std::sort(logs.begin(), logs.end());
        const double cut[3] = {quantile_sorted(logs, 0.25), quantile_sorted(logs, 0.50),
                               quantile_sorted(logs, 0.75)};
        for (auto i : idx) {
            int q = 4;
            for (int c = 0; c < 3; ++c)
                if (summaries[i].log_size <= cut[c]) { q = c + 1; break; }
            summaries[i].size_quartile = q;
        }
    }
}

// One summary per firm-year of an annual panel, sorted by (country, year,
// firm), with quartiles and diversification bins assigned.
inline std::vector<FirmSummary> firm_summaries(const FirmProductPanel& panel) {
    if (panel.quarterly) throw Error("firm summaries require an annual panel");
    std::vector<FirmSummary> out;
    out.reserve(panel.firm_marginals.size());
    for (const auto& m : panel.firm_marginals) {
        FirmSummary s;
        s.country = panel.countries.name(m.country);
        s.firm = panel.firms.name(m.firm);
        s.year = m.year;
        s.total_cents = m.total_cents;
        s.log_size = std::log(cents_to_usd(m.total_cents));
        s.np = m.np;
        s.nd = m.nd;
        s.div_bin = diversification_bin(m.np);
        out.push_back(std::move(s));
    }
    std::sort(out.begin(), out.end());
    assign_size_quartiles(out);
    return out;
}

struct DiversificationRow {
    std::string country;
    i32 year = 0;
    std::string bin;
    i64 firms = 0;
    i64 total_cents = 0;
    double firm_share_pct = 0;
    double export_share_pct = 0;
    double mean_nd = 0;             // 0 when the bin is empty
    double median_exports_usd = 0;  // 0 when the bin is empty
};

// Per-bin firm counts and shares for one year, grouped by country. Every
// country present in the year gets all six bins, empty ones with zero
// counts. Shares are percents of the country-year totals.
inline std::vector<DiversificationRow> diversification_table(const FirmProductPanel& panel,
                                                             i32 year) {
    if (panel.quarterly) throw Error("diversification table requires an annual panel");
    if (!std::binary_search(panel.years.begin(), panel.years.end(), year))
        throw Error("year " + format_int(year) + " not present in panel");

    struct Acc {
        i64 firms = 0;
        i64 cents = 0;
        i64 nd_sum = 0;
        std::vector<double> totals_usd;
    };
    // country -> bin label -> accumulator; plus country-level totals
    std::map<std::string, std::map<std::string, Acc>> acc;
    std::map<std::string, std::pair<i64, i64>> country_totals;  // firms, cents
    for (const auto& m : panel.firm_marginals) {
        if (m.year != year || m.quarter != 0) continue;
        const std::string& country = panel.countries.name(m.country);
        Acc& a = acc[country][diversification_bin(m.np)];
        a.firms += 1;
        a.cents += m.total_cents;
        a.nd_sum += m.nd;
        a.totals_usd.push_back(cents_to_usd(m.total_cents));
        auto& ct = country_totals[country];
        ct.first += 1;
        ct.second += m.total_cents;
    }

    std::vector<DiversificationRow> out;
    for (auto& [country, bins] : acc) {
        auto [n_firms, n_cents] = country_totals[country];
        for (const auto& label : diversification_bins()) {
            DiversificationRow row;
            row.country = country;
            row.year = year;
            row.bin = label;
            auto it = bins.find(label);
            if (it != bins.end()) {
                Acc& a = it->second;
                row.firms = a.firms;
                row.total_cents = a.cents;
                row.firm_share_pct = 100.0 * double(a.firms) / double(n_firms);
                row.export_share_pct =
                    n_cents > 0 ? 100.0 * double(a.cents) / double(n_cents) : 0.0;
                row.mean_nd = double(a.nd_sum) / double(a.firms);
                std::sort(a.totals_usd.begin(), a.totals_usd.end());
                std::size_t n = a.totals_usd.size();
                row.median_exports_usd = n % 2 == 1
                                             ? a.totals_usd[n / 2]
                                             : 0.5 * (a.totals_usd[n / 2 - 1] +
                                                      a.totals_usd[n / 2]);
            }
            out.push_back(std::move(row));
        }
    }
    return out;
}

struct SizeQuartileRow {
    std::string country;
    i32 year = 0;
    int quartile = 0;
    i64 firms = 0;
    i64 total_cents = 0;
    double mean_exports_usd = 0;
    double mean_np = 0;
    double mean_nd = 0;
};

// Per-quartile aggregates over firm-years. Requires every country-year to
// have at least 4 firms so quartiles are defined.
inline std::vector<SizeQuartileRow> size_quartile_table(
    const std::vector<FirmSummary>& summaries) {
    for (const auto& s : summaries)
        if (s.size_quartile == 0) throw Error("insufficient population for quartiles");

    std::map<std::tuple<std::string, i32, int>, SizeQuartileRow> acc;
    for (const auto& s : summaries) {
        SizeQuartileRow& row = acc[{s.country, s.year, s.size_quartile}];
        row.country = s.country;
        row.year = s.year;
        row.quartile = s.size_quartile;
        row.firms += 1;
        row.total_cents += s.total_cents;
        row.mean_exports_usd += cents_to_usd(s.total_cents);
        row.mean_np += double(s.np);
        row.mean_nd += double(s.nd);
    }
    std::vector<SizeQuartileRow> out;
    out.reserve(acc.size());
    for (auto& [key, row] : acc) {
        row.mean_exports_usd /= double(row.firms);
        row.mean_np /= double(row.firms);
        row.mean_nd /= double(row.firms);
        out.push_back(std::move(row));
    }
    return out;
}

struct BinnedFit {
    double a = 0;  // level: np = a * exp(b * log_size)
    double b = 0;  // growth rate of product count in log size
    struct Bin {
        i64 firms = 0;
        double mean_log_size = 0;
        double mean_np = 0;
    };
    std::vector<Bin> bins;
};

// Equal-count binning of firm-years by log size, then least squares of
// ln(mean NP) on mean log size across bins. Bin boundaries are index-based
// after a stable sort, so the split is deterministic under ties.
inline BinnedFit binned_exponential_fit(const std::vector<FirmSummary>& summaries,
                                        int n_bins) {
    if (n_bins < 2) throw Error("need at least 2 bins");
    const std::size_t n = summaries.size();
    if (n < std::size_t(n_bins)) throw Error("fewer firms than bins");

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        if (summaries[x].log_size != summaries[y].log_size)
            return summaries[x].log_size < summaries[y].log_size;
        return summaries[x].key() < summaries[y].key();
    });

    BinnedFit fit;
    for (int bi = 0; bi < n_bins; ++bi) {
        std::size_t lo = n * std::size_t(bi) / std::size_t(n_bins);
        std::size_t hi = n * std::size_t(bi + 1) / std::size_t(n_bins);
        if (lo == hi) continue;
        BinnedFit::Bin bin;
        bin.firms = i64(hi - lo);
        for (std::size_t i = lo; i < hi; ++i) {
            bin.mean_log_size += summaries[order[i]].log_size;
            bin.mean_np += double(summaries[order[i]].np);
        }
        bin.mean_log_size /= double(bin.firms);
        bin.mean_np /= double(bin.firms);
        if (bin.mean_np <= 0) throw Error("bin with non-positive mean product count");
        fit.bins.push_back(bin);
    }

    // least squares of y = ln(mean NP) on x = mean log size
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& bin : fit.bins) {
        double x = bin.mean_log_size, y = std::log(bin.mean_np);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    double m = double(fit.bins.size());
    double den = sxx - sx * sx / m;
    if (den > 0) {
        fit.b = (sxy - sx * sy / m) / den;
        fit.a = std::exp((sy - fit.b * sx) / m);
    } else {
        fit.b = 0;
        fit.a = std::exp(sy / m);
    }
    return fit;
}

}  // namespace corex
