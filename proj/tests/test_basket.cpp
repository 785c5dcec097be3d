// Year-over-year basket similarity, typical product vectors, kept/dropped
// flags, the binned size-diversification fit, and histograms.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <sstream>

#include <corex/basket.hpp>
#include <corex/descriptives.hpp>
#include <corex/panel.hpp>
#include <corex/transactions.hpp>

#include "oracles.hpp"

using namespace corex;

namespace {

using Basket = std::vector<std::pair<u32, i64>>;

i64 total_of(const Basket& b) {
    i64 t = 0;
    for (const auto& [k, v] : b) t += v;
    return t;
}

double bc(const Basket& prev, const Basket& cur) {
    return detail::bray_curtis_exact(prev, total_of(prev), cur, total_of(cur));
}

TransactionRecord rec(std::string firm, std::string product, std::string dest, int year,
                      i64 cents, std::string country = "COL") {
    TransactionRecord r;
    r.country = std::move(country);
    r.firm = std::move(firm);
    r.product = std::move(product);
    r.destination = std::move(dest);
    r.year = year;
    r.month = 1;
    r.value_cents = cents;
    return r;
}

}  // namespace

TEST_CASE("identical share vectors have similarity exactly one") {
    CHECK(bc({{0, 100}, {1, 200}}, {{0, 100}, {1, 200}}) == 1.0);
    // same shares at a different scale
    CHECK(bc({{0, 3}, {2, 6}}, {{0, 1}, {2, 2}}) == 1.0);
    CHECK(bc({{5, 1}}, {{5, 999999}}) == 1.0);
}

TEST_CASE("disjoint baskets have similarity exactly zero") {
    CHECK(bc({{0, 50}}, {{1, 70}}) == 0.0);
    CHECK(bc({{0, 10}, {1, 20}}, {{2, 5}, {3, 5}}) == 0.0);
}

TEST_CASE("the half-and-half to single-product move scores exactly one half") {
    // shares (0.5, 0.5) -> (1, 0): overlap is 0.5 regardless of totals
    CHECK(bc({{0, 50}, {1, 50}}, {{0, 77}}) == 0.5);
    CHECK(bc({{0, 500000}, {1, 500000}}, {{0, 3}}) == 0.5);
}

TEST_CASE("similarity is symmetric and scale-invariant") {
    std::mt19937_64 gen(555);
    for (int trial = 0; trial < 50; ++trial) {
        Basket a, b;
        for (u32 k = 0; k < 6; ++k) {
            if (gen() % 2) a.emplace_back(k, 1 + i64(gen() % 10000));
            if (gen() % 2) b.emplace_back(k, 1 + i64(gen() % 10000));
        }
        if (a.empty()) a.emplace_back(0, 1);
        if (b.empty()) b.emplace_back(1, 1);
        CHECK(bc(a, b) == bc(b, a));

        Basket b7 = b;
        for (auto& [k, v] : b7) v *= 7;
        CHECK(bc(a, b7) == bc(a, b));
    }
}

TEST_CASE("similarity matches the long-double share implementation") {
    std::mt19937_64 gen(606060);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t np = 8;
        std::vector<long long> prev(np, 0), cur(np, 0);
        Basket pb, cb;
        for (u32 k = 0; k < np; ++k) {
            if (gen() % 3 != 0) {
                prev[k] = 1 + i64(gen() % 1000000);
                pb.emplace_back(k, prev[k]);
            }
            if (gen() % 3 != 0) {
                cur[k] = 1 + i64(gen() % 1000000);
                cb.emplace_back(k, cur[k]);
            }
        }
        if (pb.empty()) { prev[0] = 1; pb.emplace_back(0, 1); }
        if (cb.empty()) { cur[0] = 1; cb.emplace_back(0, 1); }
        double got = bc(pb, cb);
        double want = double(oracle::bray_curtis_shares(prev, cur));
        CHECK(got == Catch::Approx(want).margin(1e-12));
        CHECK(got >= 0.0);
        CHECK(got <= 1.0);
    }
}

TEST_CASE("basket changes cover continuers and exiters, never entrants") {
    TransactionSet ts;
    ts.records.push_back(rec("F1", "010101", "USA", 2018, 5000));
    ts.records.push_back(rec("F1", "020202", "USA", 2018, 5000));
    ts.records.push_back(rec("F1", "010101", "USA", 2019, 9000));  // drops 020202
    ts.records.push_back(rec("F2", "030303", "USA", 2018, 4000));  // exits
    ts.records.push_back(rec("F3", "010101", "USA", 2019, 1000));  // entrant
    FirmProductPanel p = aggregate_panel(ts, false);

    auto records = basket_changes(p, "COL", 2019);
    REQUIRE(records.size() == 2);
    CHECK(records[0].firm == "F1");
    CHECK(records[0].year_from == 2018);
    CHECK(records[0].year_to == 2019);
    CHECK_FALSE(records[0].exited);
    CHECK(records[0].bray_curtis == 0.5);
    CHECK(records[1].firm == "F2");
    CHECK(records[1].exited);
    CHECK(records[1].bray_curtis == 0.0);

    BasketChangeRecord one = bray_curtis_record(p, "COL", "F1", 2019);
    CHECK(one.bray_curtis == 0.5);
    CHECK_THROWS_WITH(bray_curtis_record(p, "COL", "NOBODY", 2019), "no baseline basket");
    // F3 exists in the panel but has no 2018 basket
    CHECK_THROWS_WITH(bray_curtis_record(p, "COL", "F3", 2019), "no baseline basket");
}

TEST_CASE("the modal destination set becomes the typical product vector") {
    TransactionSet ts;
    ts.records.push_back(rec("F1", "010101", "D1", 2019, 100));
    ts.records.push_back(rec("F1", "020202", "D1", 2019, 100));
    ts.records.push_back(rec("F1", "010101", "D2", 2019, 100));
    ts.records.push_back(rec("F1", "020202", "D2", 2019, 100));
    ts.records.push_back(rec("F1", "010101", "D3", 2019, 100));
    auto all = tpv_assignments(ts, "COL", 2019);
    REQUIRE(all.size() == 1);
    CHECK(all[0].firm == "F1");
    CHECK(all[0].destinations == 3);
    CHECK(all[0].has_tpv);
    CHECK(all[0].products == std::vector<std::string>{"010101", "020202"});
}

TEST_CASE("firms with one destination or no recurring set have no tpv") {
    TransactionSet ts;
    ts.records.push_back(rec("F1", "010101", "D1", 2019, 100));  // one destination
    ts.records.push_back(rec("F2", "010101", "D1", 2019, 100));  // all sets distinct
    ts.records.push_back(rec("F2", "020202", "D2", 2019, 100));
    ts.records.push_back(rec("F2", "010101", "D3", 2019, 100));
    ts.records.push_back(rec("F2", "030303", "D3", 2019, 100));
    auto all = tpv_assignments(ts, "COL", 2019);
    REQUIRE(all.size() == 2);
    CHECK(all[0].firm == "F1");
    CHECK(all[0].destinations == 1);
    CHECK_FALSE(all[0].has_tpv);
    CHECK(all[0].products.empty());
    CHECK(all[1].firm == "F2");
    CHECK(all[1].destinations == 3);
    CHECK_FALSE(all[1].has_tpv);
}

TEST_CASE("tpv count ties break by value, then lexicographically") {
    // {010101} twice with 20 total vs {020202} twice with 30 total
    TransactionSet by_value;
    by_value.records.push_back(rec("F1", "010101", "D1", 2019, 10));
    by_value.records.push_back(rec("F1", "010101", "D2", 2019, 10));
    by_value.records.push_back(rec("F1", "020202", "D3", 2019, 15));
    by_value.records.push_back(rec("F1", "020202", "D4", 2019, 15));
    auto a = tpv_assignments(by_value, "COL", 2019);
    REQUIRE(a.size() == 1);
    REQUIRE(a[0].has_tpv);
    CHECK(a[0].products == std::vector<std::string>{"020202"});

    // full tie on count and value: smaller product list wins
    TransactionSet by_name;
    by_name.records.push_back(rec("F1", "020202", "D1", 2019, 10));
    by_name.records.push_back(rec("F1", "020202", "D2", 2019, 10));
    by_name.records.push_back(rec("F1", "010101", "D3", 2019, 10));
    by_name.records.push_back(rec("F1", "010101", "D4", 2019, 10));
    auto b = tpv_assignments(by_name, "COL", 2019);
    REQUIRE(b.size() == 1);
    REQUIRE(b[0].has_tpv);
    CHECK(b[0].products == std::vector<std::string>{"010101"});
}

TEST_CASE("tpv assignment ignores record order and foreign rows") {
    std::mt19937_64 gen(9090);
    TransactionSet ts;
    const char* products[4] = {"010101", "020202", "030303", "040404"};
    for (int f = 0; f < 6; ++f)
        for (int d = 0; d < 5; ++d)
            for (int k = 0; k < 4; ++k)
                if (gen() % 2)
                    ts.records.push_back(rec("F" + std::to_string(f), products[k],
                                             "D" + std::to_string(d), 2019,
                                             i64(1 + gen() % 1000)));
    // noise that must not affect the country-year in question
    ts.records.push_back(rec("F0", "050505", "D9", 2019, 5000, "PER"));
    ts.records.push_back(rec("F0", "050505", "D9", 2018, 5000));
    ts.records.push_back(rec("F0", "050505", "D9", 2019, 0));

    auto want = tpv_assignments(ts, "COL", 2019);
    for (int trial = 0; trial < 3; ++trial) {
        std::shuffle(ts.records.begin(), ts.records.end(), gen);
        auto got = tpv_assignments(ts, "COL", 2019);
        REQUIRE(got.size() == want.size());
        for (std::size_t i = 0; i < want.size(); ++i) {
            CHECK(got[i].firm == want[i].firm);
            CHECK(got[i].destinations == want[i].destinations);
            CHECK(got[i].has_tpv == want[i].has_tpv);
            CHECK(got[i].products == want[i].products);
        }
    }

    TpvAssignment solo = typical_product_vector(ts, "COL", "F0", 2019);
    for (const auto& a : want)
        if (a.firm == "F0") {
            CHECK(solo.destinations == a.destinations);
            CHECK(solo.products == a.products);
        }
    TpvAssignment ghost = typical_product_vector(ts, "COL", "NOBODY", 2019);
    CHECK_FALSE(ghost.has_tpv);
    CHECK(ghost.destinations == 0);
}

TEST_CASE("kept and dropped flags partition the year's positive cells") {
    TransactionSet ts;
    ts.records.push_back(rec("F1", "010101", "USA", 2019, 100));
    ts.records.push_back(rec("F1", "020202", "USA", 2019, 100));
    ts.records.push_back(rec("F2", "010101", "USA", 2019, 100));
    ts.records.push_back(rec("F1", "010101", "USA", 2020, 100));  // F1 keeps 010101
    ts.records.push_back(rec("F3", "030303", "USA", 2020, 100));  // entrant, irrelevant
    FirmProductPanel p = aggregate_panel(ts, false);

    auto flags = kept_dropped(p, "COL", 2019);
    REQUIRE(flags.size() == 3);  // exactly the positive cells of 2019
    CHECK(flags[0].firm == "F1");
    CHECK(flags[0].product == "010101");
    CHECK_FALSE(flags[0].dropped);
    CHECK(flags[1].firm == "F1");
    CHECK(flags[1].product == "020202");
    CHECK(flags[1].dropped);
    CHECK(flags[2].firm == "F2");
    CHECK(flags[2].dropped);
    for (const auto& f : flags) CHECK(f.year == 2019);

    CHECK_THROWS_WITH(kept_dropped(p, "COL", 2020), "year 2021 not present in panel");
}

TEST_CASE("tpv tables survive their text format") {
    TransactionSet ts;
    ts.records.push_back(rec("F1", "010101", "D1", 2019, 100));
    ts.records.push_back(rec("F1", "010101", "D2", 2019, 100));
    ts.records.push_back(rec("F2", "020202", "D1", 2019, 100));
    auto rows = tpv_assignments(ts, "COL", 2019);
    std::ostringstream out;
    save_tpv(out, rows);
    std::istringstream in(out.str());
    auto back = load_tpv(in);
    REQUIRE(back.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(back[i].firm == rows[i].firm);
        CHECK(back[i].destinations == rows[i].destinations);
        CHECK(back[i].has_tpv == rows[i].has_tpv);
        CHECK(back[i].products == rows[i].products);
    }

    auto load = [](const std::string& text) {
        std::istringstream in2(text);
        return load_tpv(in2);
    };
    const std::string header = "country,firm_id,year,destinations,has_tpv,products\n";
    CHECK_THROWS_WITH(load(header + "COL,F1,back_then,2,1,010101\n"),
                      "tpv line 2: bad integer");
    CHECK_THROWS_WITH(load(header + "COL,F1,2019,2,maybe,010101\n"),
                      "tpv line 2: has_tpv must be 0/1");
    CHECK_THROWS_WITH(load(header + "COL,F1,2019,2,1,\n"),
                      "tpv line 2: has_tpv set but no products");
}

TEST_CASE("single-product firms fit a flat size-diversification curve") {
    TransactionSet ts;
    ts.records.push_back(rec("F1", "010101", "USA", 2019, 100));
    ts.records.push_back(rec("F2", "010101", "USA", 2019, 5000));
    ts.records.push_back(rec("F3", "010101", "USA", 2019, 250000));
    ts.records.push_back(rec("F4", "010101", "USA", 2019, 9999999));
    auto summaries = firm_summaries(aggregate_panel(ts, false));
    BinnedFit fit = binned_exponential_fit(summaries, 2);
    CHECK(fit.b == Catch::Approx(0.0).margin(1e-15));
    CHECK(fit.a == Catch::Approx(1.0).epsilon(1e-15));
    REQUIRE(fit.bins.size() == 2);
    CHECK(fit.bins[0].firms == 2);
    CHECK(fit.bins[1].firms == 2);
    CHECK(fit.bins[0].mean_np == 1.0);
    CHECK(fit.bins[1].mean_np == 1.0);
}

TEST_CASE("a two-point fit passes through both bins exactly") {
    // bin 1: one firm of $1 with 1 product  -> (x, y) = (0, ln 1)
    // bin 2: one firm of $20 with 3 products -> (ln 20, ln 3)
    // so the line is b = ln3/ln20 with level a = 1
    TransactionSet ts;
    ts.records.push_back(rec("F1", "010101", "USA", 2019, 100));
    ts.records.push_back(rec("F2", "010101", "USA", 2019, 800));
    ts.records.push_back(rec("F2", "020202", "USA", 2019, 600));
    ts.records.push_back(rec("F2", "030303", "USA", 2019, 600));
    auto summaries = firm_summaries(aggregate_panel(ts, false));
    REQUIRE(summaries.size() == 2);
    BinnedFit fit = binned_exponential_fit(summaries, 2);
    REQUIRE(fit.bins.size() == 2);
    CHECK(fit.bins[0].mean_log_size == 0.0);
    CHECK(fit.bins[0].mean_np == 1.0);
    CHECK(fit.bins[1].mean_log_size == Catch::Approx(std::log(20.0)));
    CHECK(fit.bins[1].mean_np == 3.0);
    CHECK(fit.b == Catch::Approx(std::log(3.0) / std::log(20.0)).epsilon(1e-12));
    CHECK(fit.a == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("the binned fit recovers a planted exponential slope") {
    // np = round(exp(0.4 * log_size)) over a wide size range; the binned
    // regression should land near 0.4 despite the rounding
    std::mt19937_64 gen(777);
    TransactionSet ts;
    for (int f = 0; f < 400; ++f) {
        double log_usd = 2.0 + 7.0 * double(gen() % 10000) / 10000.0;
        i64 total_cents = i64(std::llround(std::exp(log_usd) * 100.0));
        int np = std::max<int>(1, int(std::llround(std::exp(0.4 * std::log(
                                          double(total_cents) / 100.0)))));
        np = std::min(np, 40);
        i64 each = std::max<i64>(1, total_cents / np);
        for (int k = 0; k < np; ++k) {
            char hs6[16];
            std::snprintf(hs6, sizeof(hs6), "%02d%04d", 1 + k % 20, k);
            ts.records.push_back(rec("F" + std::to_string(f), hs6, "USA", 2019, each));
        }
    }
    auto summaries = firm_summaries(aggregate_panel(ts, false));
    BinnedFit fit = binned_exponential_fit(summaries, 20);
    CHECK(fit.b == Catch::Approx(0.4).margin(0.05));

    CHECK_THROWS_WITH(binned_exponential_fit(summaries, 1), "need at least 2 bins");
    std::vector<FirmSummary> three(summaries.begin(), summaries.begin() + 3);
    CHECK_THROWS_WITH(binned_exponential_fit(three, 4), "fewer firms than bins");
}

TEST_CASE("histograms close the last bin at the right edge") {
    Histogram h(0.0, 1.0, 4);
    h.add(0.0);
    h.add(0.1);
    h.add(0.25);   // boundary goes to the upper bin
    h.add(0.6);
    h.add(0.999);
    h.add(1.0);    // right edge counts in the last bin
    CHECK(h.counts == std::vector<i64>{2, 1, 1, 2});
    CHECK(h.edge(0) == 0.0);
    CHECK(h.edge(2) == 0.5);
    CHECK(h.edge(4) == 1.0);
    CHECK_THROWS_WITH(h.add(-0.001), "histogram value out of range");
    CHECK_THROWS_WITH(h.add(1.001), "histogram value out of range");
}
