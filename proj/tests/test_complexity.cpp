// Product-complexity ingestion: per-year averaging, missing-value flags,
// quartile assignment over a product universe, and serialization.

#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include <corex/complexity.hpp>

using namespace corex;

namespace {

ComplexityTable load_text(const std::string& text, std::vector<i32> years = {}) {
    std::istringstream in(text);
    return load_pci(in, years);
}

const std::string kHeader = "product,year,pci\n";

}  // namespace

TEST_CASE("three yearly observations average to their mean") {
    ComplexityTable t = load_text(kHeader +
                                  "010101,2018,1\n"
                                  "010101,2019,2\n"
                                  "010101,2020,3\n");
    REQUIRE(t.rows.size() == 1);
    CHECK(t.rows[0].product == "010101");
    CHECK(t.rows[0].pci_mean == 2.0);
    CHECK(t.rows[0].years_covered == 3);
    CHECK(t.flagged.empty());
}

TEST_CASE("the year window restricts which observations count") {
    const std::string text = kHeader +
                             "010101,2018,1\n"
                             "010101,2019,2\n"
                             "010101,2020,10\n";
    ComplexityTable t = load_text(text, {2018, 2019});
    REQUIRE(t.rows.size() == 1);
    CHECK(t.rows[0].pci_mean == 1.5);
    CHECK(t.rows[0].years_covered == 2);
    CHECK(t.years_averaged == std::vector<i32>{2018, 2019});

    // a product observed only outside the window is flagged, not averaged
    ComplexityTable u = load_text(text + "020202,2017,5\n", {2018, 2019});
    REQUIRE(u.rows.size() == 1);
    REQUIRE(u.flagged.size() == 1);
    CHECK(u.flagged[0] == "020202");
}

TEST_CASE("empty and NA fields are missing observations") {
    ComplexityTable t = load_text(kHeader +
                                  "010101,2018,NA\n"
                                  "010101,2019,4\n"
                                  "020202,2018,\n"
                                  "020202,2019,NA\n");
    REQUIRE(t.rows.size() == 1);
    CHECK(t.rows[0].product == "010101");
    CHECK(t.rows[0].pci_mean == 4.0);
    CHECK(t.rows[0].years_covered == 1);
    REQUIRE(t.flagged.size() == 1);
    CHECK(t.flagged[0] == "020202");
}

TEST_CASE("six products with one unusable split five plus one flagged") {
    std::string text = kHeader;
    for (int k = 1; k <= 5; ++k)
        text += "0" + std::to_string(k) + "0101,2019," + std::to_string(k) + "\n";
    text += "060101,2019,NA\n";
    ComplexityTable t = load_text(text);
    CHECK(t.rows.size() == 5);
    REQUIRE(t.flagged.size() == 1);
    CHECK(t.flagged[0] == "060101");
}

TEST_CASE("duplicate product-years are an error listing every offender") {
    CHECK_THROWS_WITH(load_text(kHeader +
                                "010101,2018,1\n"
                                "010101,2018,2\n"
                                "020202,2019,1\n"
                                "020202,2019,1\n"),
                      "duplicate pci rows: 010101/2018 020202/2019");
}

TEST_CASE("malformed pci files fail with the offending line") {
    CHECK_THROWS_WITH(load_text(kHeader + "010101,2018\n"),
                      "pci line 2: wrong field count");
    CHECK_THROWS_WITH(load_text(kHeader + ",2018,1\n"),
                      "pci line 2: bad product or year");
    CHECK_THROWS_WITH(load_text(kHeader + "010101,recently,1\n"),
                      "pci line 2: bad product or year");
    CHECK_THROWS_WITH(load_text(kHeader + "010101,2018,high\n"),
                      "pci line 2: bad pci value");
}

TEST_CASE("four covered products take one quartile each") {
    ComplexityTable t = load_text(kHeader +
                                  "010101,2019,-1\n"
                                  "020202,2019,0\n"
                                  "030303,2019,1\n"
                                  "040404,2019,2\n");
    quartile_assign(t, {"010101", "020202", "030303", "040404"});
    CHECK(t.find("010101")->quartile == 1);
    CHECK(t.find("020202")->quartile == 2);
    CHECK(t.find("030303")->quartile == 3);
    CHECK(t.find("040404")->quartile == 4);
}

TEST_CASE("values tied at a cut point fall to the lower quartile") {
    // eight equal values: every cut equals the common value, everything is Q1
    std::string text = kHeader;
    std::vector<std::string> universe;
    for (int k = 1; k <= 8; ++k) {
        std::string p = "0" + std::to_string(k) + "0101";
        text += p + ",2019,3.5\n";
        universe.push_back(p);
    }
    ComplexityTable t = load_text(text);
    quartile_assign(t, universe);
    for (const auto& r : t.rows) CHECK(r.quartile == 1);
}

TEST_CASE("quartile counts over distinct values differ by at most one") {
    std::mt19937_64 gen(808);
    std::string text = kHeader;
    std::vector<std::string> universe;
    for (int k = 0; k < 37; ++k) {
        char name[16];
        std::snprintf(name, sizeof(name), "%02d%04d", 1 + k % 20, k);
        text += std::string(name) + ",2019," +
                std::to_string(double(gen() % 100000) / 1000.0 - 50.0) + "\n";
        universe.push_back(name);
    }
    ComplexityTable t = load_text(text);
    quartile_assign(t, universe);
    i64 counts[5] = {0, 0, 0, 0, 0};
    for (const auto& r : t.rows) counts[r.quartile] += 1;
    CHECK(counts[0] == 0);
    i64 lo = counts[1], hi = counts[1];
    for (int q = 2; q <= 4; ++q) {
        lo = std::min(lo, counts[q]);
        hi = std::max(hi, counts[q]);
    }
    CHECK(hi - lo <= 1);
}

TEST_CASE("products outside the universe stay unassigned") {
    ComplexityTable t = load_text(kHeader +
                                  "010101,2019,1\n"
                                  "020202,2019,2\n"
                                  "030303,2019,3\n"
                                  "040404,2019,4\n"
                                  "990101,2019,99\n");
    // the duplicate universe entry must not double-count
    quartile_assign(t, {"010101", "020202", "030303", "040404", "010101"});
    CHECK(t.find("990101")->quartile == 0);
    CHECK(t.find("040404")->quartile == 4);

    CHECK_THROWS_WITH(quartile_assign(t, {}), "empty product universe");
    CHECK_THROWS_WITH(quartile_assign(t, {"010101", "020202", "030303"}),
                      "fewer than 4 covered products");
    // universe entries with no pci row don't count as covered
    CHECK_THROWS_WITH(
        quartile_assign(t, {"010101", "020202", "030303", "777777"}),
        "fewer than 4 covered products");
}

TEST_CASE("averaging ignores file row order") {
    std::vector<std::string> lines = {"010101,2018,1\n", "010101,2019,2\n",
                                      "020202,2018,5\n", "020202,2020,7\n",
                                      "030303,2019,-2\n"};
    ComplexityTable want = load_text(kHeader + lines[0] + lines[1] + lines[2] +
                                     lines[3] + lines[4]);
    std::mt19937_64 gen(4);
    for (int trial = 0; trial < 5; ++trial) {
        std::shuffle(lines.begin(), lines.end(), gen);
        std::string text = kHeader;
        for (const auto& l : lines) text += l;
        ComplexityTable got = load_text(text);
        REQUIRE(got.rows.size() == want.rows.size());
        for (std::size_t i = 0; i < want.rows.size(); ++i) {
            CHECK(got.rows[i].product == want.rows[i].product);
            CHECK(got.rows[i].pci_mean == want.rows[i].pci_mean);
            CHECK(got.rows[i].years_covered == want.rows[i].years_covered);
        }
    }
}

TEST_CASE("complexity tables survive their text format") {
    ComplexityTable t = load_text(kHeader +
                                  "010101,2019,1\n"
                                  "020202,2019,2\n"
                                  "030303,2019,3\n"
                                  "040404,2019,4\n");
    quartile_assign(t, {"010101", "020202", "030303", "040404"});
    std::ostringstream out;
    save_complexity(out, t);
    std::istringstream in(out.str());
    ComplexityTable back = load_complexity(in);
    std::ostringstream out2;
    save_complexity(out2, back);
    CHECK(out2.str() == out.str());
    REQUIRE(back.rows.size() == 4);
    CHECK(back.find("030303")->quartile == 3);
    CHECK(back.find("030303")->pci_mean == 3.0);

    auto load = [](const std::string& text) {
        std::istringstream in2(text);
        return load_complexity(in2);
    };
    const std::string header = "product,pci_mean,years,quartile\n";
    CHECK_THROWS_WITH(load(header + "010101,1.5,1\n"),
                      "complexity line 2: wrong field count");
    CHECK_THROWS_WITH(load(header + "010101,high,1,1\n"),
                      "complexity line 2: bad value");
    CHECK_THROWS_WITH(load(header + "010101,1.5,1,5\n"),
                      "complexity line 2: bad value");
    CHECK_THROWS_WITH(load(header + "010101,1.5,1,1\n010101,2.5,1,2\n"),
                      "duplicate complexity product 010101");
}
