#pragma once
// Builders for the three regression frames: firm-product flows with lagged
// covariates, country-product aggregates with export-weighted covariate
// means, and the firm-product export-continuation (extensive margin) frame.
// The sample rule shared by the firm-level frames: one row per firm-product
// pair with positive exports in the prior year, keeping zero outcomes so
// exits stay in the sample.

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "corex/basket.hpp"
#include "corex/common.hpp"
#include "corex/complexity.hpp"
#include "corex/coreness.hpp"
#include "corex/frame.hpp"
#include "corex/panel.hpp"

namespace corex {

struct FrameInputs {
    const FirmProductPanel* panel = nullptr;
    std::vector<const CorenessTable*> coreness;     // one table per country-year
    const std::vector<TpvAssignment>* tpv = nullptr;  // pooled; may be empty
    const ComplexityTable* complexity = nullptr;
};

struct FrameOptions {
    std::vector<i32> years;  // estimation years t; empty = every year with a predecessor
    i32 crisis_year = 2020;
    bool include_single = false;  // firm frame: keep single-product firms with a dummy
};

namespace detail {

inline std::vector<i32> estimation_years(const FirmProductPanel& panel,
                                         const FrameOptions& opt) {
    std::vector<i32> years = opt.years;
    if (years.empty()) {
        for (i32 y : panel.years)
            if (std::binary_search(panel.years.begin(), panel.years.end(), y - 1))
                years.push_back(y);
    }
    std::sort(years.begin(), years.end());
    years.erase(std::unique(years.begin(), years.end()), years.end());
    if (years.empty()) throw Error("no estimation years with a baseline year");
    return years;
}

struct CorenessLookup {
    const std::vector<const CorenessTable*>& tables;

    const CorenessTable& table(const std::string& country, i32 year) const {
        for (const auto* t : tables)
            if (t && t->country == country && t->year == year) return *t;
        throw Error("no coreness table for " + country + "/" + format_int(year));
    }
    double value(const CorenessTable& t, const std::string& firm,
                 const std::string& product) const {
        CorenessRow probe;
        probe.firm = firm;
        probe.product = product;
        auto it = std::lower_bound(t.rows.begin(), t.rows.end(), probe);
        if (it == t.rows.end() || it->firm != firm || it->product != product)
            throw Error("coreness table for " + t.country + "/" + format_int(t.year) +
                        " is missing firm " + firm + ", product " + product);
        return it->coreness;
    }
};

struct TpvLookup {
    std::vector<const TpvAssignment*> sorted;

    explicit TpvLookup(const std::vector<TpvAssignment>* tpv) {
        if (!tpv) return;
        sorted.reserve(tpv->size());
        for (const auto& a : *tpv) sorted.push_back(&a);
        std::sort(sorted.begin(), sorted.end(),
                  [](const TpvAssignment* a, const TpvAssignment* b) { return *a < *b; });
    }
    // true when the product belongs to the firm-year's typical product vector
    bool contains(const std::string& country, i32 year, const std::string& firm,
                  const std::string& product) const {
        TpvAssignment probe;
        probe.country = country;
        probe.year = year;
        probe.firm = firm;
        auto it = std::lower_bound(sorted.begin(), sorted.end(), &probe,
                                   [](const TpvAssignment* a, const TpvAssignment* b) {
                                       return *a < *b;
                                   });
        if (it == sorted.end() || !((*it)->key() == probe.key())) return false;
        return (*it)->has_tpv &&
               std::binary_search((*it)->products.begin(), (*it)->products.end(), product);
    }
};

inline std::set<std::pair<u32, i32>> country_year_presence(const FirmProductPanel& panel) {
    std::set<std::pair<u32, i32>> present;
    for (const auto& m : panel.firm_marginals)
        if (m.quarter == 0) present.emplace(m.country, m.year);
    return present;
}

inline void require_inputs(const FrameInputs& in, bool need_complexity = true) {
    if (!in.panel) throw Error("frame builder needs a panel");
    if (in.panel->quarterly) throw Error("frames require an annual panel");
    if (need_complexity && !in.complexity) throw Error("frame builder needs a complexity table");
}

}  // namespace detail

// Firm-product frame: outcome is the year-t export value in USD (zero for
// exits), covariates are lagged one year. Single-product firms are excluded
// unless include_single is set, which instead adds a lagged single-product
// dummy column.
inline std::pair<RegressionFrame, DropCounts> build_firm_frame(const FrameInputs& in,
                                                               const FrameOptions& opt) {
    detail::require_inputs(in);
    const FirmProductPanel& panel = *in.panel;
    std::vector<i32> years = detail::estimation_years(panel, opt);
    detail::CorenessLookup cor{in.coreness};
    detail::TpvLookup tpv(in.tpv);
    auto present = detail::country_year_presence(panel);

    RegressionFrame frame;
    DropCounts drops;
    frame.key_names = {"country", "firm_id", "hs6", "year"};
    frame.key_cols.resize(4);
    frame.outcome_name = "exports_usd";
    frame.covariate_names = {"ln_exports_lag", "coreness_lag", "coreness_x_c20",
                             "complexity",     "tpv_lag",      "ln_nd_lag",
                             "ln_np_lag",      "c20"};
    if (opt.include_single) frame.covariate_names.push_back("single_product_lag");
    frame.covariates.resize(frame.covariate_names.size());
    frame.fe_names = {"firm_hs2", "hs2", "year", "country"};
    frame.fe_cols.resize(4);

    for (u32 c = 0; c < panel.countries.size(); ++c) {
        const std::string& country = panel.countries.name(c);
        for (i32 t : years) {
            if (!present.count({c, t - 1})) continue;
            const CorenessTable& ctab = cor.table(country, t - 1);
            YearBaskets prev = year_baskets(panel, country, t - 1);
            const double c20 = t == opt.crisis_year ? 1.0 : 0.0;
            for (std::size_t fi = 0; fi < prev.firms.size(); ++fi) {
                const u32 firm = prev.firms[fi];
                const FirmMarginal* fm = panel.find_firm(c, firm, t - 1);
                if (!fm) throw Error("missing firm marginal");
                if (!opt.include_single && fm->np < 2) {
                    count_drop(drops, "single-product firm excluded",
                               i64(prev.baskets[fi].size()));
                    continue;
                }
                if (fm->nd < 1) {
                    count_drop(drops, "missing destination count",
                               i64(prev.baskets[fi].size()));
                    continue;
                }
                const std::string& firm_name = panel.firms.name(firm);
                for (const auto& [product, lag_cents] : prev.baskets[fi]) {
                    const std::string& product_name = panel.products.name(product);
                    const auto* pci = in.complexity->find(product_name);
                    if (!pci) {
                        count_drop(drops, "missing complexity");
                        continue;
                    }
                    const PanelCell* now = panel.find_cell(c, firm, product, t);
                    double coreness_lag = cor.value(ctab, firm_name, product_name);
                    std::string chapter = hs_chapter(product_name);

                    frame.key_cols[0].push_back(country);
                    frame.key_cols[1].push_back(firm_name);
                    frame.key_cols[2].push_back(product_name);
                    frame.key_cols[3].push_back(format_int(t));
                    frame.outcome.push_back(now ? cents_to_usd(now->cents) : 0.0);
                    std::size_t x = 0;
                    frame.covariates[x++].push_back(std::log(cents_to_usd(lag_cents)));
                    frame.covariates[x++].push_back(coreness_lag);
                    frame.covariates[x++].push_back(coreness_lag * c20);
                    frame.covariates[x++].push_back(pci->pci_mean);
                    frame.covariates[x++].push_back(
                        tpv.contains(country, t - 1, firm_name, product_name) ? 1.0 : 0.0);
                    frame.covariates[x++].push_back(std::log(double(fm->nd)));
                    frame.covariates[x++].push_back(std::log(double(fm->np)));
                    frame.covariates[x++].push_back(c20);
                    if (opt.include_single)
                        frame.covariates[x++].push_back(fm->np == 1 ? 1.0 : 0.0);
                    frame.fe_cols[0].push_back(firm_name + "#" + chapter);
                    frame.fe_cols[1].push_back(chapter);
                    frame.fe_cols[2].push_back(format_int(t));
                    frame.fe_cols[3].push_back(country);
                }
            }
        }
    }
    if (frame.n() == 0) throw Error("firm frame is empty");
    frame.check_consistent();
    return {std::move(frame), std::move(drops)};
}

// Country-product frame: outcome is the log of the product's country-year
// exports; covariates are export-weighted means over the firms exporting
// the product in the prior year, with coreness averaged over multi-product
// firms only.
inline std::pair<RegressionFrame, DropCounts> build_country_frame(const FrameInputs& in,
                                                                  const FrameOptions& opt) {
    detail::require_inputs(in);
    const FirmProductPanel& panel = *in.panel;
    std::vector<i32> years = detail::estimation_years(panel, opt);
    detail::CorenessLookup cor{in.coreness};
    detail::TpvLookup tpv(in.tpv);
    auto present = detail::country_year_presence(panel);

    RegressionFrame frame;
    DropCounts drops;
    frame.key_names = {"country", "hs6", "year"};
    frame.key_cols.resize(3);
    frame.outcome_name = "ln_exports_usd";
    frame.covariate_names = {"ln_exports_lag", "coreness_lag",     "coreness_x_c20",
                             "complexity",     "tpv_share_lag",    "single_share_lag",
                             "ln_nd_lag",      "ln_np_lag",        "c20"};
    frame.covariates.resize(frame.covariate_names.size());
    frame.fe_names = {"country_hs2", "hs2", "year", "country"};
    frame.fe_cols.resize(4);

    for (u32 c = 0; c < panel.countries.size(); ++c) {
        const std::string& country = panel.countries.name(c);
        for (i32 t : years) {
            if (!present.count({c, t - 1})) continue;
            const CorenessTable& ctab = cor.table(country, t - 1);
            YearBaskets prev = year_baskets(panel, country, t - 1);
            const double c20 = t == opt.crisis_year ? 1.0 : 0.0;

            struct Exporter {
                i64 cents;       // firm's exports of the product in t-1
                i32 np, nd;
                double coreness;
                bool in_tpv;
            };
            std::map<u32, std::vector<Exporter>> by_product;
            for (std::size_t fi = 0; fi < prev.firms.size(); ++fi) {
                const u32 firm = prev.firms[fi];
                const FirmMarginal* fm = panel.find_firm(c, firm, t - 1);
                if (!fm) throw Error("missing firm marginal");
                const std::string& firm_name = panel.firms.name(firm);
                for (const auto& [product, cents] : prev.baskets[fi]) {
                    const std::string& product_name = panel.products.name(product);
                    Exporter e;
                    e.cents = cents;
                    e.np = fm->np;
                    e.nd = fm->nd;
                    e.coreness = cor.value(ctab, firm_name, product_name);
                    e.in_tpv = tpv.contains(country, t - 1, firm_name, product_name);
                    by_product[product].push_back(e);
                }
            }

            for (const auto& [product, exporters] : by_product) {
                const std::string& product_name = panel.products.name(product);
                const ProductMarginal* now = panel.find_product(c, product, t);
                if (!now || now->total_cents <= 0) {
                    count_drop(drops, "zero outcome");
                    continue;
                }
                const auto* pci = in.complexity->find(product_name);
                if (!pci) {
                    count_drop(drops, "missing complexity");
                    continue;
                }
                i64 total = 0, multi_total = 0, single_total = 0, tpv_total = 0;
                double core_w = 0, nd_w = 0, np_w = 0;
                bool nd_ok = true;
                for (const auto& e : exporters) {
                    total += e.cents;
                    nd_w += double(e.cents) * double(e.nd);
                    np_w += double(e.cents) * double(e.np);
                    if (e.nd < 1) nd_ok = false;
                    if (e.np >= 2) {
                        multi_total += e.cents;
                        core_w += double(e.cents) * e.coreness;
                    } else {
                        single_total += e.cents;
                    }
                    if (e.in_tpv) tpv_total += e.cents;
                }
                if (multi_total <= 0) {
                    count_drop(drops, "no multi-product exporter");
                    continue;
                }
                if (!nd_ok) {
                    count_drop(drops, "missing destination count");
                    continue;
                }
                double coreness_lag = core_w / double(multi_total);
                std::string chapter = hs_chapter(product_name);

                frame.key_cols[0].push_back(country);
                frame.key_cols[1].push_back(product_name);
                frame.key_cols[2].push_back(format_int(t));
                frame.outcome.push_back(std::log(cents_to_usd(now->total_cents)));
                std::size_t x = 0;
                frame.covariates[x++].push_back(std::log(cents_to_usd(total)));
                frame.covariates[x++].push_back(coreness_lag);
                frame.covariates[x++].push_back(coreness_lag * c20);
                frame.covariates[x++].push_back(pci->pci_mean);
                frame.covariates[x++].push_back(double(tpv_total) / double(total));
                frame.covariates[x++].push_back(double(single_total) / double(total));
                frame.covariates[x++].push_back(std::log(nd_w / double(total)));
                frame.covariates[x++].push_back(std::log(np_w / double(total)));
                frame.covariates[x++].push_back(c20);
                frame.fe_cols[0].push_back(country + "#" + chapter);
                frame.fe_cols[1].push_back(chapter);
                frame.fe_cols[2].push_back(format_int(t));
                frame.fe_cols[3].push_back(country);
            }
        }
    }
    if (frame.n() == 0) throw Error("country frame is empty");
    frame.check_consistent();
    return {std::move(frame), std::move(drops)};
}

// Extensive-margin frame: outcome is the indicator that the lagged-positive
// firm-product pair still exports in year t. Firm-level controls: log of
// the firm's lagged total exports and the lagged single-product dummy.
inline std::pair<RegressionFrame, DropCounts> build_logit_frame(const FrameInputs& in,
                                                                const FrameOptions& opt) {
    detail::require_inputs(in);
    const FirmProductPanel& panel = *in.panel;
    std::vector<i32> years = detail::estimation_years(panel, opt);
    detail::CorenessLookup cor{in.coreness};
    detail::TpvLookup tpv(in.tpv);
    auto present = detail::country_year_presence(panel);

    RegressionFrame frame;
    DropCounts drops;
    frame.key_names = {"country", "firm_id", "hs6", "year"};
    frame.key_cols.resize(4);
    frame.outcome_name = "exported";
    frame.covariate_names = {"ln_exports_firm_lag", "coreness_lag", "coreness_x_c20",
                             "complexity",          "tpv_lag",      "single_product_lag",
                             "c20"};
    frame.covariates.resize(frame.covariate_names.size());
    frame.fe_names = {"hs2_year", "hs2", "year", "country"};
    frame.fe_cols.resize(4);

    for (u32 c = 0; c < panel.countries.size(); ++c) {
        const std::string& country = panel.countries.name(c);
        for (i32 t : years) {
            if (!present.count({c, t - 1})) continue;
            const CorenessTable& ctab = cor.table(country, t - 1);
            YearBaskets prev = year_baskets(panel, country, t - 1);
            const double c20 = t == opt.crisis_year ? 1.0 : 0.0;
            for (std::size_t fi = 0; fi < prev.firms.size(); ++fi) {
                const u32 firm = prev.firms[fi];
                const FirmMarginal* fm = panel.find_firm(c, firm, t - 1);
                if (!fm) throw Error("missing firm marginal");
                const std::string& firm_name = panel.firms.name(firm);
                for (const auto& [product, lag_cents] : prev.baskets[fi]) {
                    const std::string& product_name = panel.products.name(product);
                    const auto* pci = in.complexity->find(product_name);
                    if (!pci) {
                        count_drop(drops, "missing complexity");
                        continue;
                    }
                    double coreness_lag = cor.value(ctab, firm_name, product_name);
                    std::string chapter = hs_chapter(product_name);

                    frame.key_cols[0].push_back(country);
                    frame.key_cols[1].push_back(firm_name);
                    frame.key_cols[2].push_back(product_name);
                    frame.key_cols[3].push_back(format_int(t));
                    frame.outcome.push_back(panel.find_cell(c, firm, product, t) ? 1.0
                                                                                 : 0.0);
                    std::size_t x = 0;
                    frame.covariates[x++].push_back(
                        std::log(cents_to_usd(fm->total_cents)));
                    frame.covariates[x++].push_back(coreness_lag);
                    frame.covariates[x++].push_back(coreness_lag * c20);
                    frame.covariates[x++].push_back(pci->pci_mean);
                    frame.covariates[x++].push_back(
                        tpv.contains(country, t - 1, firm_name, product_name) ? 1.0 : 0.0);
                    frame.covariates[x++].push_back(fm->np == 1 ? 1.0 : 0.0);
                    frame.covariates[x++].push_back(c20);
                    frame.fe_cols[0].push_back(chapter + "#" + format_int(t));
                    frame.fe_cols[1].push_back(chapter);
                    frame.fe_cols[2].push_back(format_int(t));
                    frame.fe_cols[3].push_back(country);
                }
            }
        }
    }
    if (frame.n() == 0) throw Error("logit frame is empty");
    frame.check_consistent();
    return {std::move(frame), std::move(drops)};
}

}  // namespace corex
