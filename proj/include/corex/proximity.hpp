#pragma once
// Product-proximity network: Jaccard similarity between products based on
// the sets of firms specialized in each. Weights are ratios of exact
// integer co-occurrence counts, so edges are reproducible bit-for-bit
// regardless of thread count.

#include <algorithm>
#include <istream>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "corex/common.hpp"
#include "corex/csv.hpp"
#include "corex/panel.hpp"
#include "corex/parallel.hpp"
#include "corex/rca.hpp"

namespace corex {

struct ProximityNetwork {
    std::string country;
    i32 year = 0;
    std::vector<std::string> products;  // node names, sorted; every node has degree >= 1
    std::vector<i64> degree;            // Λ_k: number of specialized exporters, parallel
    struct Edge {
        u32 a = 0, b = 0;   // node indexes, a < b
        i64 lambda_ab = 0;  // co-specialization count, > 0
        double jaccard = 0;
        auto key() const { return std::tie(a, b); }
        bool operator<(const Edge& o) const { return key() < o.key(); }
    };
    std::vector<Edge> edges;  // sorted by (a, b); zero-count pairs absent

    int node_index(std::string_view name) const {
        auto it = std::lower_bound(products.begin(), products.end(), name);
        if (it == products.end() || *it != name) return -1;
        return int(it - products.begin());
    }

    // Similarity between two nodes by index; the diagonal is 1 by
    // definition and absent pairs are 0.
    double j(u32 na, u32 nb) const {
        if (na == nb) return 1.0;
        u64 key = na < nb ? (u64(na) << 32 | nb) : (u64(nb) << 32 | na);
        auto it = jmap_.find(key);
        return it == jmap_.end() ? 0.0 : it->second;
    }

    void build_lookup() {
        jmap_.clear();
        jmap_.reserve(edges.size() * 2);
        for (const auto& e : edges) jmap_.emplace(u64(e.a) << 32 | e.b, e.jaccard);
    }

  private:
    std::unordered_map<u64, double> jmap_;
};

// Builds the proximity network for one country-year from the binarized
// specialization matrix. Co-occurrence counting runs over firms in fixed
// blocks; integer counts merge associatively, so the result is independent
// of the thread count.
inline ProximityNetwork jaccard_network(const SpecializationMatrix& y,
                                        const NameTable& product_names, int threads = 1) {
    if (y.pairs.empty()) throw Error("empty specialization matrix");

    // node list: distinct specialized products, in name order (panel product
    // ids are lexicographic ranks, so id order is name order)
    std::vector<u32> node_products;
    for (const auto& [firm, product] : y.pairs) node_products.push_back(product);
    std::sort(node_products.begin(), node_products.end());
    node_products.erase(std::unique(node_products.begin(), node_products.end()),
                        node_products.end());
    std::vector<int> node_of(product_names.size(), -1);
    for (std::size_t n = 0; n < node_products.size(); ++n)
        node_of[node_products[n]] = int(n);

    // per-firm sorted node lists
    std::vector<std::vector<u32>> firm_nodes;
    u32 cur_firm = 0;
    bool have_firm = false;
    for (const auto& [firm, product] : y.pairs) {
        if (!have_firm || firm != cur_firm) {
            firm_nodes.emplace_back();
            cur_firm = firm;
            have_firm = true;
        }
        firm_nodes.back().push_back(u32(node_of[product]));
    }

    ProximityNetwork net;
    net.country = y.country;
    net.year = y.year;
    net.products.reserve(node_products.size());
    for (u32 p : node_products) net.products.push_back(product_names.name(p));
    net.degree.assign(node_products.size(), 0);
    for (const auto& nodes : firm_nodes)
        for (u32 n : nodes) net.degree[n] += 1;

    using PairCounts = std::unordered_map<u64, i64>;
    PairCounts counts = block_reduce<PairCounts>(
        firm_nodes.size(), threads, PairCounts{},
        [&](std::size_t lo, std::size_t hi) {
            PairCounts local;
            for (std::size_t f = lo; f < hi; ++f) {
                const auto& nodes = firm_nodes[f];
                for (std::size_t i = 0; i < nodes.size(); ++i)
                    for (std::size_t jx = i + 1; jx < nodes.size(); ++jx)
                        local[u64(nodes[i]) << 32 | nodes[jx]] += 1;
            }
            return local;
        },
        [](PairCounts acc, PairCounts&& part) {
            for (const auto& [k, v] : part) acc[k] += v;
            return acc;
        });

    net.edges.reserve(counts.size());
    for (const auto& [key, lambda_ab] : counts) {
        ProximityNetwork::Edge e;
        e.a = u32(key >> 32);
        e.b = u32(key & 0xffffffffu);
        e.lambda_ab = lambda_ab;
        e.jaccard = double(lambda_ab) /
                    double(net.degree[e.a] + net.degree[e.b] - lambda_ab);
        net.edges.push_back(e);
    }
    std::sort(net.edges.begin(), net.edges.end());
    net.build_lookup();
    return net;
}

// ---------------------------------------------------------------------------
// Serialization. Diagonal rows (hs6_a = hs6_b, jaccard = 1) declare every
// node with its degree, so nodes without edges survive a round trip.

inline const std::vector<std::string>& network_columns() {
    static const std::vector<std::string> cols = {
        "country", "year", "hs6_a", "hs6_b", "lambda_ab", "lambda_a", "lambda_b", "jaccard"};
    return cols;
}

inline void save_network(std::ostream& out, const ProximityNetwork& net) {
    CsvWriter w(out, network_columns());
    for (std::size_t n = 0; n < net.products.size(); ++n) {
        const std::string& d = format_int(net.degree[n]);
        w.write_row({net.country, format_int(net.year), net.products[n], net.products[n],
                     d, d, d, "1"});
    }
    for (const auto& e : net.edges) {
        w.write_row({net.country, format_int(net.year), net.products[e.a],
                     net.products[e.b], format_int(e.lambda_ab),
                     format_int(net.degree[e.a]), format_int(net.degree[e.b]),
                     format_g17(e.jaccard)});
    }
}

inline ProximityNetwork load_network(std::istream& in) {
    CsvReader reader(in);
    const std::size_t c_country = reader.column("country");
    const std::size_t c_year = reader.column("year");
    const std::size_t c_a = reader.column("hs6_a");
    const std::size_t c_b = reader.column("hs6_b");
    const std::size_t c_lab = reader.column("lambda_ab");
    const std::size_t c_la = reader.column("lambda_a");

    ProximityNetwork net;
    struct RawEdge { std::string a, b; i64 lambda_ab; };
    std::vector<RawEdge> raw_edges;
    std::vector<std::pair<std::string, i64>> raw_nodes;
    std::vector<std::string> row;
    bool first = true;
    while (reader.next(row)) {
        if (row.size() != network_columns().size())
            throw Error("network line " + format_int(reader.line_no()) +
                        ": wrong field count");
        i64 year;
        if (!parse_int(row[c_year], year))
            throw Error("network line " + format_int(reader.line_no()) + ": bad year");
        if (first) {
            net.country = std::string(trim(row[c_country]));
            net.year = i32(year);
            first = false;
        } else if (net.country != trim(row[c_country]) || net.year != i32(year)) {
            throw Error("network file mixes country-years");
        }
        std::string a(trim(row[c_a])), b(trim(row[c_b]));
        i64 lab, la;
        if (!parse_int(row[c_lab], lab) || !parse_int(row[c_la], la) || lab < 0 || la < 0)
            throw Error("network line " + format_int(reader.line_no()) + ": bad count");
        if (a == b)
            raw_nodes.emplace_back(std::move(a), la);
        else
            raw_edges.push_back({std::move(a), std::move(b), lab});
    }
    if (first) throw Error("empty network file");

    std::sort(raw_nodes.begin(), raw_nodes.end());
    for (std::size_t i = 1; i < raw_nodes.size(); ++i)
        if (raw_nodes[i].first == raw_nodes[i - 1].first)
            throw Error("duplicate network node " + raw_nodes[i].first);
    for (auto& [name, deg] : raw_nodes) {
        if (deg <= 0) throw Error("network node " + name + " with non-positive degree");
        net.products.push_back(name);
        net.degree.push_back(deg);
    }
    for (const auto& r : raw_edges) {
        int na = net.node_index(r.a), nb = net.node_index(r.b);
        if (na < 0 || nb < 0)
            throw Error("network edge references undeclared node " +
                        (na < 0 ? r.a : r.b));
        ProximityNetwork::Edge e;
        e.a = u32(std::min(na, nb));
        e.b = u32(std::max(na, nb));
        e.lambda_ab = r.lambda_ab;
        if (e.lambda_ab <= 0 ||
            e.lambda_ab > std::min(net.degree[e.a], net.degree[e.b]))
            throw Error("network edge " + r.a + "-" + r.b + " with impossible count");
        e.jaccard = double(e.lambda_ab) /
                    double(net.degree[e.a] + net.degree[e.b] - e.lambda_ab);
        net.edges.push_back(e);
    }
    std::sort(net.edges.begin(), net.edges.end());
    for (std::size_t i = 1; i < net.edges.size(); ++i)
        if (net.edges[i].key() == net.edges[i - 1].key())
            throw Error("duplicate network edge");
    net.build_lookup();
    return net;
}

}  // namespace corex
