// Revealed comparative advantage, the binarized specialization matrix, the
// Jaccard product network, and firm-product coreness, checked against hand
// examples and a brute-force dense-matrix implementation.

#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include <corex/coreness.hpp>
#include <corex/panel.hpp>
#include <corex/proximity.hpp>
#include <corex/rca.hpp>
#include <corex/transactions.hpp>

#include "oracles.hpp"

using namespace corex;

namespace {

// Same layout as the dense oracle panel, in raw cents: rows = firms
// F1..Fn, columns = products "010000","020001",..., zeros meaning no trade.
FirmProductPanel panel_from_cents(const std::vector<std::vector<long long>>& cents,
                                  int year = 2019, const std::string& country = "COL") {
    TransactionSet ts;
    for (std::size_t f = 0; f < cents.size(); ++f)
        for (std::size_t k = 0; k < cents[f].size(); ++k) {
            if (cents[f][k] == 0) continue;
            TransactionRecord r;
            r.country = country;
            r.firm = "F" + std::to_string(f + 1);
            char hs6[16];
            std::snprintf(hs6, sizeof(hs6), "%02zu%04zu", 1 + k % 20, k % 10000);
            r.product = hs6;
            r.destination = "USA";
            r.year = year;
            r.month = 1;
            r.value_cents = i64(cents[f][k]);
            ts.records.push_back(std::move(r));
        }
    return aggregate_panel(ts, false);
}

FirmProductPanel panel_from_dollars(const std::vector<std::vector<long long>>& dollars,
                                    int year = 2019, const std::string& country = "COL") {
    std::vector<std::vector<long long>> cents = dollars;
    for (auto& row : cents)
        for (auto& v : row) v *= 100;
    return panel_from_cents(cents, year, country);
}

double rca_of(const RcaMatrix& m, const FirmProductPanel& p, const std::string& firm,
              const std::string& product) {
    u32 f = p.firms.id(firm), k = p.products.id(product);
    for (const auto& e : m.entries)
        if (e.firm == f && e.product == k) return e.rca;
    throw std::runtime_error("rca entry not found");
}

bool specialized_of(const RcaMatrix& m, const FirmProductPanel& p, const std::string& firm,
                    const std::string& product) {
    u32 f = p.firms.id(firm), k = p.products.id(product);
    for (const auto& e : m.entries)
        if (e.firm == f && e.product == k) return e.specialized;
    throw std::runtime_error("rca entry not found");
}

const CorenessRow& row_of(const CorenessTable& t, const std::string& firm,
                          const std::string& product) {
    for (const auto& r : t.rows)
        if (r.firm == firm && r.product == product) return r;
    throw std::runtime_error("coreness row not found");
}

std::string network_bytes(const ProximityNetwork& net) {
    std::ostringstream out;
    save_network(out, net);
    return out.str();
}

std::string coreness_bytes(const CorenessTable& t) {
    std::ostringstream out;
    save_coreness(out, t);
    return out.str();
}

}  // namespace

TEST_CASE("the two-firm worked example reproduces its known values") {
    // firm 1 exports product A only; firm 2 exports A and B equally
    FirmProductPanel p = panel_from_dollars({{10, 0}, {10, 10}});
    RcaMatrix m = compute_rca(p, "COL", 2019);
    REQUIRE(m.entries.size() == 3);
    CHECK(rca_of(m, p, "F1", "010000") == Catch::Approx(1.5).epsilon(1e-15));
    CHECK(rca_of(m, p, "F2", "010000") == Catch::Approx(0.75).epsilon(1e-15));
    CHECK(rca_of(m, p, "F2", "020001") == Catch::Approx(1.5).epsilon(1e-15));
    CHECK(specialized_of(m, p, "F1", "010000"));
    CHECK_FALSE(specialized_of(m, p, "F2", "010000"));
    CHECK(specialized_of(m, p, "F2", "020001"));

    SpecializationMatrix y = binarize(m);
    REQUIRE(y.pairs.size() == 2);
    CHECK(y.pairs[0] == std::make_pair(p.firms.id("F1"), p.products.id("010000")));
    CHECK(y.pairs[1] == std::make_pair(p.firms.id("F2"), p.products.id("020001")));
}

TEST_CASE("the specialization boundary includes exactly 1 and excludes 0.999") {
    // rank-one matrix: every RCA is exactly 1, so every pair is specialized
    FirmProductPanel uniform = panel_from_dollars({{3, 6}, {1, 2}});
    RcaMatrix mu = compute_rca(uniform, "COL", 2019);
    for (const auto& e : mu.entries) {
        CHECK(e.rca == Catch::Approx(1.0).epsilon(1e-15));
        CHECK(e.specialized);
    }

    // near-boundary: RCA 0.999 out, RCA 1.001 in
    FirmProductPanel near = panel_from_dollars({{999, 1001}, {1001, 999}});
    RcaMatrix mn = compute_rca(near, "COL", 2019);
    CHECK(rca_of(mn, near, "F1", "010000") == Catch::Approx(0.999).epsilon(1e-12));
    CHECK_FALSE(specialized_of(mn, near, "F1", "010000"));
    CHECK(specialized_of(mn, near, "F1", "020001"));
    CHECK(specialized_of(mn, near, "F2", "010000"));
    CHECK_FALSE(specialized_of(mn, near, "F2", "020001"));
}

TEST_CASE("boundary decisions hold near 1 at products of order 1e16") {
    // X * T and R * C land within parts-per-billion of each other at ~2e16,
    // where the double ratio prints as 0.999999995; the exact wide-integer
    // comparison must still call the strict side correctly.
    const i64 a = 100000000, b = 1, c = 99999999;
    FirmProductPanel p = panel_from_cents({{a, b}, {c, 0}});
    oracle::DensePanel dp;
    dp.cents = {{a, b}, {c, 0}};
    RcaMatrix m = compute_rca(p, "COL", 2019);
    CHECK(specialized_of(m, p, "F1", "010000") == dp.specialized(0, 0));
    CHECK(specialized_of(m, p, "F1", "020001") == dp.specialized(0, 1));
    CHECK(specialized_of(m, p, "F2", "010000") == dp.specialized(1, 0));
    // the F1-product-A ratio sits a few parts per billion under 1.0
    double r = rca_of(m, p, "F1", "010000");
    CHECK(r == Catch::Approx(1.0).epsilon(1e-8));
    CHECK(r < 1.0);
}

TEST_CASE("rca rejects quarterly panels and absent country-years") {
    TransactionSet ts;
    TransactionRecord r;
    r.country = "COL"; r.firm = "F1"; r.product = "010101"; r.destination = "USA";
    r.year = 2019; r.month = 1; r.value_cents = 100;
    ts.records.push_back(r);
    FirmProductPanel q = aggregate_panel(ts, true);
    CHECK_THROWS_WITH(compute_rca(q, "COL", 2019), "annual panel required");
    FirmProductPanel p = aggregate_panel(ts, false);
    CHECK_THROWS_WITH(compute_rca(p, "PER", 2019), "country PER not present in panel");
    CHECK_THROWS_WITH(compute_rca(p, "COL", 2020), "no data for country COL, year 2020");
}

TEST_CASE("three specialized firms give the textbook jaccard weight") {
    // A and B specialized in both products, C only in the first:
    // lambda_1 = 3, lambda_2 = 2, joint = 2, J = 2 / (3 + 2 - 2) = 2/3
    NameTable products;
    products.build({"010101", "020202"});
    SpecializationMatrix y;
    y.country = "COL";
    y.year = 2019;
    y.pairs = {{0, 0}, {0, 1}, {1, 0}, {1, 1}, {2, 0}};
    ProximityNetwork net = jaccard_network(y, products);
    REQUIRE(net.products.size() == 2);
    CHECK(net.degree[0] == 3);
    CHECK(net.degree[1] == 2);
    REQUIRE(net.edges.size() == 1);
    CHECK(net.edges[0].lambda_ab == 2);
    CHECK(net.edges[0].jaccard == Catch::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(net.j(0, 0) == 1.0);
    CHECK(net.j(1, 1) == 1.0);
    CHECK(net.j(0, 1) == net.edges[0].jaccard);
    CHECK(net.j(1, 0) == net.edges[0].jaccard);

    SpecializationMatrix empty;
    CHECK_THROWS_WITH(jaccard_network(empty, products), "empty specialization matrix");
}

TEST_CASE("products never co-specialized share no edge and j reads 0") {
    NameTable products;
    products.build({"010101", "020202", "030303"});
    SpecializationMatrix y;
    y.country = "COL";
    y.year = 2019;
    y.pairs = {{0, 0}, {1, 1}, {2, 0}, {2, 2}, {3, 2}};
    ProximityNetwork net = jaccard_network(y, products);
    REQUIRE(net.products.size() == 3);
    CHECK(net.degree[0] == 2);  // firms 0 and 2
    CHECK(net.degree[1] == 1);  // firm 1
    CHECK(net.degree[2] == 2);  // firms 2 and 3
    REQUIRE(net.edges.size() == 1);  // only products 0 and 2 co-occur (firm 2)
    CHECK(net.edges[0].a == 0);
    CHECK(net.edges[0].b == 2);
    CHECK(net.edges[0].lambda_ab == 1);
    CHECK(net.edges[0].jaccard == Catch::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(net.j(0, 1) == 0.0);
    CHECK(net.j(1, 2) == 0.0);
}

TEST_CASE("a 60/40 basket with proximity one-half scores 0.8 on the major product") {
    FirmProductPanel p = panel_from_dollars({{60, 40}});
    ProximityNetwork net;
    net.country = "COL";
    net.year = 2019;
    net.products = {"010000", "020001"};
    net.degree = {3, 3};
    ProximityNetwork::Edge e;
    e.a = 0; e.b = 1; e.lambda_ab = 2; e.jaccard = 0.5;
    net.edges.push_back(e);
    net.build_lookup();

    CorenessTable t = coreness_table(p, net, "COL", 2019);
    REQUIRE(t.rows.size() == 2);
    const CorenessRow& major = row_of(t, "F1", "010000");
    CHECK(major.coreness == 0.8);  // (1 * 0.6 + 0.5 * 0.4), exact in binary
    CHECK(major.share == 0.6);
    CHECK(major.np == 2);
    CHECK_FALSE(major.off_network);
    const CorenessRow& minor = row_of(t, "F1", "020001");
    CHECK(minor.coreness == 0.7);
    CHECK(minor.share == 0.4);

    CHECK_THROWS_WITH(coreness_table(p, net, "COL", 2020),
                      "network is for COL/2019, not COL/2020");
    ProximityNetwork other = net;
    other.country = "PER";
    CHECK_THROWS_WITH(coreness_table(p, other, "COL", 2019),
                      "network is for PER/2019, not COL/2019");
}

TEST_CASE("a single-product firm has coreness exactly one") {
    FirmProductPanel p = panel_from_dollars({{123456, 0}, {77, 33}});
    RcaMatrix m = compute_rca(p, "COL", 2019);
    ProximityNetwork net = jaccard_network(binarize(m), p.products);
    CorenessTable t = coreness_table(p, net, "COL", 2019);
    const CorenessRow& solo = row_of(t, "F1", "010000");
    CHECK(solo.coreness == 1.0);
    CHECK(solo.share == 1.0);
    CHECK(solo.np == 1);
}

TEST_CASE("rescaling a firm's basket leaves emitted coreness strings unchanged") {
    // the same basket at three scales a factor 10^3 / 10^6 apart, each an
    // exact number of cents; gcd reduction maps all three to weights 12:5:3
    const std::vector<std::vector<std::vector<long long>>> scaled = {
        {{60'000, 25'000, 15'000}},
        {{60'000'000, 25'000'000, 15'000'000}},
        {{60'000'000'000'000, 25'000'000'000'000, 15'000'000'000'000}},
    };
    ProximityNetwork net;
    net.country = "COL";
    net.year = 2019;
    net.products = {"010000", "020001", "030002"};
    net.degree = {5, 4, 3};
    ProximityNetwork::Edge e01, e02, e12;
    e01.a = 0; e01.b = 1; e01.lambda_ab = 2; e01.jaccard = 2.0 / 7.0;
    e02.a = 0; e02.b = 2; e02.lambda_ab = 1; e02.jaccard = 1.0 / 7.0;
    e12.a = 1; e12.b = 2; e12.lambda_ab = 3; e12.jaccard = 3.0 / 4.0;
    net.edges = {e01, e02, e12};
    net.build_lookup();

    std::vector<std::string> reference;
    for (const auto& cents : scaled) {
        CorenessTable t = coreness_table(panel_from_cents(cents), net, "COL", 2019);
        std::vector<std::string> emitted;
        for (const auto& r : t.rows) {
            emitted.push_back(format_g17(r.coreness));
            emitted.push_back(format_g17(r.share));
        }
        if (reference.empty()) reference = emitted;
        CHECK(emitted == reference);
    }
    REQUIRE(reference.size() == 6);
}

TEST_CASE("coreness never falls below the product's own share") {
    std::mt19937_64 gen(4242);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<std::vector<long long>> dollars(4 + gen() % 5,
                                                    std::vector<long long>(3 + gen() % 5, 0));
        for (auto& row : dollars)
            for (auto& v : row)
                if (gen() % 3 != 0) v = 1 + i64(gen() % 100000);
        bool any = false;
        for (auto& row : dollars)
            for (auto& v : row) any = any || v > 0;
        if (!any) continue;
        FirmProductPanel p = panel_from_dollars(dollars);
        RcaMatrix m = compute_rca(p, "COL", 2019);
        ProximityNetwork net = jaccard_network(binarize(m), p.products);
        CorenessTable t = coreness_table(p, net, "COL", 2019);
        for (const auto& r : t.rows) {
            CHECK(r.coreness >= r.share - 1e-15);
            CHECK(r.coreness >= 0.0);
            CHECK(r.coreness <= 1.0 + 1e-15);
        }
    }
}

TEST_CASE("a product outside the network keeps only its self-term") {
    FirmProductPanel p = panel_from_cents({{5000, 3000, 2000}});
    ProximityNetwork net;  // deliberately omits the third product
    net.country = "COL";
    net.year = 2019;
    net.products = {"010000", "020001"};
    net.degree = {3, 3};
    ProximityNetwork::Edge e;
    e.a = 0; e.b = 1; e.lambda_ab = 2; e.jaccard = 0.5;
    net.edges.push_back(e);
    net.build_lookup();

    CorenessTable t = coreness_table(p, net, "COL", 2019);
    const CorenessRow& in1 = row_of(t, "F1", "010000");
    const CorenessRow& in2 = row_of(t, "F1", "020001");
    const CorenessRow& out = row_of(t, "F1", "030002");
    CHECK_FALSE(in1.off_network);
    CHECK_FALSE(in2.off_network);
    CHECK(out.off_network);
    CHECK(in1.coreness == Catch::Approx(0.65).epsilon(1e-15));  // (5 + 1.5)/10
    CHECK(in2.coreness == Catch::Approx(0.55).epsilon(1e-15));  // (2.5 + 3)/10
    CHECK(out.coreness == out.share);  // nothing but itself
    CHECK(out.share == Catch::Approx(0.2).epsilon(1e-15));
}

TEST_CASE("random small panels agree with the dense brute-force implementation") {
    std::mt19937_64 gen(20190822);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t nf = 2 + gen() % 9, np = 2 + gen() % 7;
        oracle::DensePanel dp;
        dp.cents.assign(nf, std::vector<long long>(np, 0));
        for (auto& row : dp.cents)
            for (auto& v : row)
                if (gen() % 4 != 0) v = 1 + i64(gen() % 1000000);
        // every firm needs at least one positive cell to exist in the panel
        for (auto& row : dp.cents) {
            bool any = false;
            for (auto v : row) any = any || v > 0;
            if (!any) row[gen() % np] = 1 + i64(gen() % 1000);
        }
        FirmProductPanel p = panel_from_cents(dp.cents);
        REQUIRE(p.firms.size() == nf);

        // product ids in the panel are name ranks; the builder's names are
        // generated in column order, which is lexicographic, so dense column
        // k corresponds to panel product id k among *present* products.
        // To keep the mapping trivial, ensure every product appears.
        bool all_present = p.products.size() == np;
        if (!all_present) continue;

        RcaMatrix m = compute_rca(p, "COL", 2019);
        std::size_t checked = 0;
        for (const auto& e : m.entries) {
            // firm ids are name ranks and "F10" sorts before "F2", so map
            // back to the dense row through the name
            std::size_t k = e.product;
            std::size_t fi = std::stoul(p.firms.name(e.firm).substr(1)) - 1;
            CHECK(double(e.rca) ==
                  Catch::Approx(double(dp.rca(fi, k))).epsilon(1e-12));
            CHECK(e.specialized == dp.specialized(fi, k));
            ++checked;
        }
        CHECK(checked == m.entries.size());

        ProximityNetwork net = jaccard_network(binarize(m), p.products);
        // degrees and pairwise weights against set arithmetic
        for (std::size_t n = 0; n < net.products.size(); ++n) {
            std::size_t k = p.products.id(net.products[n]);
            CHECK(net.degree[n] == dp.lambda(k));
        }
        for (std::size_t a = 0; a < net.products.size(); ++a)
            for (std::size_t b = a + 1; b < net.products.size(); ++b) {
                std::size_t ka = p.products.id(net.products[a]);
                std::size_t kb = p.products.id(net.products[b]);
                double want = double(dp.jaccard(ka, kb));
                CHECK(net.j(u32(a), u32(b)) == Catch::Approx(want).margin(1e-15));
            }

        CorenessTable t = coreness_table(p, net, "COL", 2019);
        for (const auto& r : t.rows) {
            std::size_t fi = std::stoul(r.firm.substr(1)) - 1;
            std::size_t k = p.products.id(r.product);
            CHECK(r.coreness ==
                  Catch::Approx(double(dp.coreness(fi, k))).epsilon(1e-12));
            CHECK_FALSE(r.off_network);  // real panels cover every traded product
        }
    }
}

TEST_CASE("exporter-share-weighted mean rca is one for every product") {
    std::mt19937_64 gen(7);
    oracle::DensePanel dp;
    dp.cents.assign(8, std::vector<long long>(6, 0));
    for (auto& row : dp.cents)
        for (auto& v : row) v = 1 + i64(gen() % 500000);
    FirmProductPanel p = panel_from_cents(dp.cents);
    RcaMatrix m = compute_rca(p, "COL", 2019);

    // sum over firms of (R_i / T) * RCA_ik telescopes to C_k / C_k = 1
    std::vector<double> weighted(p.products.size(), 0.0);
    double grand = double(dp.grand_total());
    for (const auto& e : m.entries) {
        std::size_t fi = std::stoul(p.firms.name(e.firm).substr(1)) - 1;
        weighted[e.product] += e.rca * double(dp.firm_total(fi)) / grand;
    }
    for (double w : weighted) CHECK(w == Catch::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("a proximity network survives its text format byte for byte") {
    std::mt19937_64 gen(99);
    std::vector<std::vector<long long>> dollars(12, std::vector<long long>(6, 0));
    for (auto& row : dollars)
        for (auto& v : row)
            if (gen() % 3 != 0) v = 1 + i64(gen() % 10000);
    for (auto& row : dollars) {
        bool any = false;
        for (auto v : row) any = any || v > 0;
        if (!any) row[0] = 1;
    }
    FirmProductPanel p = panel_from_dollars(dollars);
    ProximityNetwork net = jaccard_network(binarize(compute_rca(p, "COL", 2019)),
                                           p.products);
    std::string bytes = network_bytes(net);
    std::istringstream in(bytes);
    ProximityNetwork back = load_network(in);
    CHECK(network_bytes(back) == bytes);
    CHECK(back.products == net.products);
    CHECK(back.degree == net.degree);
    REQUIRE(back.edges.size() == net.edges.size());
    for (std::size_t i = 0; i < net.edges.size(); ++i) {
        CHECK(back.edges[i].a == net.edges[i].a);
        CHECK(back.edges[i].b == net.edges[i].b);
        CHECK(back.edges[i].lambda_ab == net.edges[i].lambda_ab);
        CHECK(back.edges[i].jaccard == net.edges[i].jaccard);  // bit-identical
    }
}

TEST_CASE("network loading rejects malformed and inconsistent files") {
    auto load = [](const std::string& text) {
        std::istringstream in(text);
        return load_network(in);
    };
    const std::string header =
        "country,year,hs6_a,hs6_b,lambda_ab,lambda_a,lambda_b,jaccard\n";
    CHECK_THROWS_WITH(load(header), "empty network file");
    CHECK_THROWS_WITH(load(header + "COL,2019,010101,010101,3,3,3\n"),
                      "network line 2: wrong field count");
    CHECK_THROWS_WITH(load(header + "COL,twenty,010101,010101,3,3,3,1\n"),
                      "network line 2: bad year");
    CHECK_THROWS_WITH(load(header + "COL,2019,010101,010101,x,3,3,1\n"),
                      "network line 2: bad count");
    CHECK_THROWS_WITH(load(header + "COL,2019,010101,010101,3,3,3,1\n"
                                    "PER,2019,020202,020202,2,2,2,1\n"),
                      "network file mixes country-years");
    CHECK_THROWS_WITH(load(header + "COL,2019,010101,010101,3,3,3,1\n"
                                    "COL,2019,010101,010101,3,3,3,1\n"),
                      "duplicate network node 010101");
    CHECK_THROWS_WITH(load(header + "COL,2019,010101,010101,0,0,0,1\n"),
                      "network node 010101 with non-positive degree");
    CHECK_THROWS_WITH(load(header + "COL,2019,010101,010101,3,3,3,1\n"
                                    "COL,2019,010101,020202,1,3,1,0.33\n"),
                      "network edge references undeclared node 020202");
    CHECK_THROWS_WITH(load(header + "COL,2019,010101,010101,3,3,3,1\n"
                                    "COL,2019,020202,020202,1,1,1,1\n"
                                    "COL,2019,010101,020202,2,3,1,0.5\n"),
                      "network edge 010101-020202 with impossible count");
    CHECK_THROWS_WITH(load(header + "COL,2019,010101,010101,3,3,3,1\n"
                                    "COL,2019,020202,020202,2,2,2,1\n"
                                    "COL,2019,010101,020202,1,3,2,0.25\n"
                                    "COL,2019,020202,010101,1,2,3,0.25\n"),
                      "duplicate network edge");
}

TEST_CASE("a coreness table survives its text format byte for byte") {
    FirmProductPanel p = panel_from_dollars({{60, 40, 7}, {13, 0, 9}});
    ProximityNetwork net = jaccard_network(binarize(compute_rca(p, "COL", 2019)),
                                           p.products);
    CorenessTable t = coreness_table(p, net, "COL", 2019);
    std::string bytes = coreness_bytes(t);
    std::istringstream in(bytes);
    CorenessTable back = load_coreness(in);
    CHECK(coreness_bytes(back) == bytes);

    auto load = [](const std::string& text) {
        std::istringstream in2(text);
        return load_coreness(in2);
    };
    const std::string header = "country,firm_id,hs6,year,coreness,np,share,off_network\n";
    CHECK_THROWS_WITH(load(header), "empty coreness file");
    CHECK_THROWS_WITH(load(header + "COL,F1,010101,2019,0.5,2,0.6\n"),
                      "coreness line 2: wrong field count");
    CHECK_THROWS_WITH(load(header + "COL,F1,010101,2019,high,2,0.6,0\n"),
                      "coreness line 2: bad value");
    CHECK_THROWS_WITH(load(header + "COL,F1,010101,2019,0.5,0,0.6,0\n"),
                      "coreness line 2: bad value");
    CHECK_THROWS_WITH(load(header + "COL,F1,010101,2019,0.5,2,0.6,maybe\n"),
                      "coreness line 2: bad off_network flag");
    CHECK_THROWS_WITH(load(header + "COL,F1,010101,2019,0.5,2,0.6,0\n"
                                    "COL,F1,010101,2020,0.5,2,0.6,0\n"),
                      "coreness file mixes country-years");
}

TEST_CASE("network and coreness results are independent of the thread count") {
    std::mt19937_64 gen(31337);
    std::vector<std::vector<long long>> dollars(200, std::vector<long long>(12, 0));
    for (auto& row : dollars)
        for (auto& v : row)
            if (gen() % 3 != 0) v = 1 + i64(gen() % 1000000);
    for (auto& row : dollars) {
        bool any = false;
        for (auto v : row) any = any || v > 0;
        if (!any) row[0] = 1;
    }
    FirmProductPanel p = panel_from_dollars(dollars);
    SpecializationMatrix y = binarize(compute_rca(p, "COL", 2019));

    ProximityNetwork net1 = jaccard_network(y, p.products, 1);
    ProximityNetwork net4 = jaccard_network(y, p.products, 4);
    CHECK(network_bytes(net1) == network_bytes(net4));

    CorenessTable t1 = coreness_table(p, net1, "COL", 2019, 1);
    CorenessTable t4 = coreness_table(p, net1, "COL", 2019, 4);
    CHECK(coreness_bytes(t1) == coreness_bytes(t4));
}
