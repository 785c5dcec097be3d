#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "corex/common.hpp"
#include "corex/config.hpp"
#include "corex/csv.hpp"
#include "corex/parallel.hpp"
#include "corex/rng.hpp"
#include "corex/transactions.hpp"

namespace corex {

// Generator for transaction panels with planted structure:
//   - firm sizes lognormal(mu, sigma), basket width NP ~ round(size^b),
//   - products partitioned into blocks; baskets drawn block-preferentially
//     (weight p_in for the firm's home block, p_out elsewhere),
//   - home-block products grow faster and are dropped less often,
//   - per-product destination sets stable across years.
// All draws go through KeyedRng streams keyed by firm index, so output is
// independent of thread count and generation order.
struct SynthConfig {
    u64 seed = 42;
    i64 n_firms = 5000;
    i64 n_products = 200;
    i64 n_blocks = 10;
    i64 n_destinations = 12;
    i64 n_years = 3;
    i64 year0 = 2018;
    double b = 0.3;
    double p_in = 0.9;
    double p_out = 0.1;
    double lognormal_mu = 8.0;
    double lognormal_sigma = 1.5;
    double drop_in = 0.03;
    double drop_out = 0.18;
    double growth_in = 0.25;
    double growth_out = 0.0;
    double dest_all_prob = 0.7;
    double re_export_rate = 0.02;
    double nd_scale = 0.6;
    double nd_exponent = 0.15;
    i64 crisis_year = 2020;
    double crisis_factor = 1.5;
    std::string country = "SYN";

    void validate() const {
        if (n_firms <= 0) throw Error("n_firms must be positive");
        if (n_products <= 0) throw Error("n_products must be positive");
        if (n_blocks <= 0 || n_blocks > n_products)
            throw Error("n_blocks must lie in [1, n_products]");
        if (n_destinations <= 0) throw Error("n_destinations must be positive");
        if (n_years <= 0) throw Error("n_years must be positive");
        if (!(b > 0.0)) throw Error("b must be positive");
        if (!(p_in > p_out)) throw Error("p_in must exceed p_out");
        if (p_out < 0.0) throw Error("p_out must be non-negative");
        if (p_in > 1.0 || p_out > 1.0) throw Error("block weights must lie in [0, 1]");
        if (!(lognormal_sigma >= 0.0)) throw Error("lognormal_sigma must be non-negative");
        for (double p : {drop_in, drop_out, dest_all_prob, re_export_rate}) {
            if (!(p >= 0.0 && p <= 1.0)) throw Error("probabilities must lie in [0, 1]");
        }
        if (drop_in > drop_out) throw Error("drop_in must not exceed drop_out");
        if (crisis_factor < 0.0) throw Error("crisis_factor must be non-negative");
        if (country.empty()) throw Error("country must be non-empty");
    }

    static SynthConfig from_config(const KeyValueConfig& cfg) {
        SynthConfig s;
        s.seed = u64(cfg.get_int("synth.seed", i64(s.seed)));
        s.n_firms = cfg.get_int("synth.n_firms", s.n_firms);
        s.n_products = cfg.get_int("synth.n_products", s.n_products);
        s.n_blocks = cfg.get_int("synth.n_blocks", s.n_blocks);
        s.n_destinations = cfg.get_int("synth.n_destinations", s.n_destinations);
        s.n_years = cfg.get_int("synth.n_years", s.n_years);
        s.year0 = cfg.get_int("synth.year0", s.year0);
        s.b = cfg.get_double("synth.b", s.b);
        s.p_in = cfg.get_double("synth.p_in", s.p_in);
        s.p_out = cfg.get_double("synth.p_out", s.p_out);
        s.lognormal_mu = cfg.get_double("synth.lognormal_mu", s.lognormal_mu);
        s.lognormal_sigma = cfg.get_double("synth.lognormal_sigma", s.lognormal_sigma);
        s.drop_in = cfg.get_double("synth.drop_in", s.drop_in);
        s.drop_out = cfg.get_double("synth.drop_out", s.drop_out);
        s.growth_in = cfg.get_double("synth.growth_in", s.growth_in);
        s.growth_out = cfg.get_double("synth.growth_out", s.growth_out);
        s.dest_all_prob = cfg.get_double("synth.dest_all_prob", s.dest_all_prob);
        s.re_export_rate = cfg.get_double("synth.re_export_rate", s.re_export_rate);
        s.nd_scale = cfg.get_double("synth.nd_scale", s.nd_scale);
        s.nd_exponent = cfg.get_double("synth.nd_exponent", s.nd_exponent);
        s.crisis_year = cfg.get_int("synth.crisis_year", s.crisis_year);
        s.crisis_factor = cfg.get_double("synth.crisis_factor", s.crisis_factor);
        s.country = cfg.get("synth.country", s.country);
        s.validate();
        return s;
    }
};

namespace synth_detail {

enum Stream : u64 {
    kSize = 1,
    kBasket = 2,
    kShare = 3,
    kNd = 4,
    kDest = 5,
    kDrop = 6,
    kMonth = 7,
    kReexport = 8,
    kPci = 9,
};

inline std::string firm_name(i64 i) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "F%06lld", static_cast<long long>(i + 1));
    return std::string(buf);
}

// Six-digit code whose leading two digits (the chapter) cycle through 20
// values as the product index advances, while blocks are contiguous index
// ranges. Chapters and blocks are therefore deliberately decoupled.
inline std::string product_name(i64 p) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%02lld%04lld",
                  static_cast<long long>(1 + p % 20), static_cast<long long>(p));
    return std::string(buf);
}

inline std::string destination_name(i64 d) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "D%02lld", static_cast<long long>(d + 1));
    return std::string(buf);
}

inline i64 block_of(i64 product, i64 n_products, i64 n_blocks) {
    return product * n_blocks / n_products;
}

}  // namespace synth_detail

inline TransactionSet generate_transactions(const SynthConfig& cfg, int threads = 1) {
    using namespace synth_detail;
    cfg.validate();
    KeyedRng rng(cfg.seed);

    const i64 nf = cfg.n_firms;
    const i64 np_all = cfg.n_products;
    const i64 nb = cfg.n_blocks;
    std::vector<std::string> product_names(static_cast<std::size_t>(np_all));
    for (i64 p = 0; p < np_all; ++p) product_names[std::size_t(p)] = product_name(p);
    std::vector<std::string> dest_names(static_cast<std::size_t>(cfg.n_destinations));
    for (i64 d = 0; d < cfg.n_destinations; ++d) dest_names[std::size_t(d)] = destination_name(d);

    std::vector<std::vector<TransactionRecord>> per_firm(static_cast<std::size_t>(nf));
    std::vector<std::string> firm_errors(static_cast<std::size_t>(nf));

    for_each_block(std::size_t(nf), threads, [&](std::size_t, std::size_t lo, std::size_t hi) {
        for (std::size_t fi = lo; fi < hi; ++fi) {
            const i64 i = i64(fi);
            const double ln_size =
                cfg.lognormal_mu + cfg.lognormal_sigma * rng.normal(kSize, u64(i), 0);
            const i64 basket_np =
                std::max<i64>(1, i64(std::llround(std::exp(cfg.b * ln_size))));
            if (basket_np > np_all) {
                firm_errors[fi] = "requested basket of " + format_int(basket_np) +
                                  " products exceeds n_products=" + format_int(np_all);
                continue;
            }
            const i64 home = i % nb;

            // Block-preferential sampling without replacement: remaining
            // home-block products carry weight p_in, all others p_out.
            std::vector<char> used(std::size_t(np_all), 0);
            i64 in_lo = home * np_all / nb;
            i64 in_hi = (home + 1) * np_all / nb;
            i64 in_rem = in_hi - in_lo;
            i64 out_rem = np_all - in_rem;
            std::vector<i64> basket;
            basket.reserve(static_cast<std::size_t>(basket_np));
            u64 draw_idx = 0;
            auto pick_nth_unused = [&](bool in_block, i64 nth) {
                for (i64 p = 0; p < np_all; ++p) {
                    const bool is_in = p >= in_lo && p < in_hi;
                    if (is_in != in_block || used[std::size_t(p)]) continue;
                    if (nth-- == 0) return p;
                }
                throw Error("internal sampling error");
            };
            while (i64(basket.size()) < basket_np) {
                const double w_in = cfg.p_in * double(in_rem);
                const double w_out = cfg.p_out * double(out_rem);
                const double total = w_in + w_out;
                bool take_in;
                if (total > 0.0) {
                    take_in = rng.uniform(kBasket, u64(i), draw_idx++) * total < w_in;
                    if (take_in && in_rem == 0) take_in = false;
                    if (!take_in && out_rem == 0) take_in = true;
                } else {
                    take_in = in_rem > 0;
                }
                const i64 rem = take_in ? in_rem : out_rem;
                const i64 nth = i64(rng.uniform_int(kBasket, u64(i), draw_idx++, u64(rem)));
                const i64 p = pick_nth_unused(take_in, nth);
                used[std::size_t(p)] = 1;
                (take_in ? in_rem : out_rem) -= 1;
                basket.push_back(p);
            }

            // Dirichlet(1,...,1) shares of the firm's total size.
            std::vector<double> share(static_cast<std::size_t>(basket_np));
            double share_sum = 0.0;
            for (i64 k = 0; k < basket_np; ++k) {
                share[std::size_t(k)] = rng.exponential(kShare, u64(i), u64(k));
                share_sum += share[std::size_t(k)];
            }
            const double size_usd = std::exp(ln_size);

            // Destination count grows mildly with size; the set is a
            // contiguous ring segment starting at a random offset.
            const double nd_mean = cfg.nd_scale * std::exp(cfg.nd_exponent * ln_size);
            i64 nd = 1 + std::min<i64>(cfg.n_destinations - 1,
                                       i64(rng.exponential(kNd, u64(i), 0) * nd_mean));
            const i64 dest_start =
                i64(rng.uniform_int(kNd, u64(i), 1, u64(cfg.n_destinations)));
            std::vector<i64> firm_dests(static_cast<std::size_t>(nd));
            for (i64 d = 0; d < nd; ++d)
                firm_dests[std::size_t(d)] = (dest_start + d) % cfg.n_destinations;

            auto& out = per_firm[fi];
            const std::string firm = firm_name(i);
            for (i64 k = 0; k < basket_np; ++k) {
                const i64 p = basket[std::size_t(k)];
                const bool in_block = p >= in_lo && p < in_hi;
                const double base_usd = size_usd * share[std::size_t(k)] / share_sum;
                const double growth = in_block ? cfg.growth_in : cfg.growth_out;

                // Destination choice is product-level and stable over years.
                const bool ship_all =
                    rng.uniform(kDest, u64(i), u64(k)) < cfg.dest_all_prob;
                const i64 single = firm_dests[std::size_t(
                    rng.uniform_int(kDest, u64(i), u64(np_all + k), u64(nd)))];

                bool alive = true;
                for (i64 y = 0; y < cfg.n_years; ++y) {
                    const i64 year = cfg.year0 + y;
                    if (y > 0 && alive) {
                        double p_drop = (in_block ? cfg.drop_in : cfg.drop_out) *
                                        (year == cfg.crisis_year ? cfg.crisis_factor : 1.0);
                        p_drop = std::min(p_drop, 1.0);
                        if (rng.uniform(kDrop, u64(i), u64(k * cfg.n_years + y)) < p_drop)
                            alive = false;
                    }
                    if (!alive) continue;
                    i64 cents = std::max<i64>(
                        1, std::llround(base_usd * std::exp(growth * double(y)) * 100.0));
                    const i64 n_dest = ship_all ? nd : 1;
                    const i64 per = cents / n_dest;
                    const i64 extra = cents % n_dest;
                    for (i64 d = 0; d < n_dest; ++d) {
                        const i64 dest = ship_all ? firm_dests[std::size_t(d)] : single;
                        i64 v = per + (d < extra ? 1 : 0);
                        if (v <= 0) continue;
                        TransactionRecord tr;
                        tr.country = cfg.country;
                        tr.firm = firm;
                        tr.product = product_names[std::size_t(p)];
                        tr.destination = dest_names[std::size_t(dest)];
                        tr.year = year;
                        tr.month = 1 + int(rng.uniform_int(
                                          kMonth, u64(i),
                                          u64((k * cfg.n_years + y) * cfg.n_destinations + d),
                                          12));
                        tr.value_cents = v;
                        tr.re_export = false;
                        out.push_back(tr);
                    }
                    if (rng.uniform(kReexport, u64(i), u64(k * cfg.n_years + y)) <
                        cfg.re_export_rate) {
                        TransactionRecord tr;
                        tr.country = cfg.country;
                        tr.firm = firm;
                        tr.product = product_names[std::size_t(p)];
                        tr.destination = dest_names[std::size_t(firm_dests[0])];
                        tr.year = year;
                        tr.month = 1 + int(rng.uniform_int(
                                          kReexport, u64(i),
                                          u64(np_all * cfg.n_years + k * cfg.n_years + y), 12));
                        tr.value_cents = std::max<i64>(1, cents / 10);
                        tr.re_export = true;
                        out.push_back(tr);
                    }
                }
            }
        }
    });

    for (const auto& err : firm_errors) {
        if (!err.empty()) throw Error(err);
    }
    TransactionSet all;
    std::size_t total = 0;
    for (const auto& v : per_firm) total += v.size();
    all.records.reserve(total);
    for (auto& v : per_firm) {
        all.records.insert(all.records.end(), v.begin(), v.end());
        v.clear();
        v.shrink_to_fit();
    }
    return all;
}

// Companion product-complexity table so a purely synthetic pipeline run has a
// complexity input: a stable per-product level plus small yearly noise, drawn
// from the same keyed source as the transactions.
struct SynthPciRow {
    std::string product;
    i64 year = 0;
    double pci = 0.0;
};

inline std::vector<SynthPciRow> generate_pci(const SynthConfig& cfg) {
    cfg.validate();
    KeyedRng rng(cfg.seed);
    std::vector<SynthPciRow> rows;
    rows.reserve(std::size_t(cfg.n_products * cfg.n_years));
    for (i64 p = 0; p < cfg.n_products; ++p) {
        const double base = rng.normal(synth_detail::kPci, u64(p), 0);
        for (i64 y = 0; y < cfg.n_years; ++y) {
            SynthPciRow row;
            row.product = synth_detail::product_name(p);
            row.year = cfg.year0 + y;
            row.pci = base + 0.1 * rng.normal(synth_detail::kPci, u64(p), u64(1 + y));
            rows.push_back(row);
        }
    }
    return rows;
}

inline void save_pci(const std::vector<SynthPciRow>& rows, std::ostream& out) {
    CsvWriter w(out, {"product", "year", "pci"});
    for (const auto& r : rows) w.write_row({r.product, format_int(r.year), format_g17(r.pci)});
}

// Ground truth helpers used when checking recovery of planted structure.
inline i64 synth_block_of_product(const SynthConfig& cfg, const std::string& product) {
    for (i64 p = 0; p < cfg.n_products; ++p) {
        if (synth_detail::product_name(p) == product)
            return synth_detail::block_of(p, cfg.n_products, cfg.n_blocks);
    }
    throw Error("unknown synthetic product " + product);
}

inline std::vector<i64> synth_product_blocks(const SynthConfig& cfg) {
    std::vector<i64> blocks(std::size_t(cfg.n_products));
    for (i64 p = 0; p < cfg.n_products; ++p)
        blocks[std::size_t(p)] = synth_detail::block_of(p, cfg.n_products, cfg.n_blocks);
    return blocks;
}

}  // namespace corex
