// Command-line driver: each subcommand wraps one stage of the export
// analytics pipeline, and `run` executes the whole thing from a config file.
// Failures print a machine-readable JSON error block on stderr and exit
// nonzero.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "corex/basket.hpp"
#include "corex/complexity.hpp"
#include "corex/config.hpp"
#include "corex/coreness.hpp"
#include "corex/csv.hpp"
#include "corex/descriptives.hpp"
#include "corex/estimators.hpp"
#include "corex/frame.hpp"
#include "corex/frames_build.hpp"
#include "corex/panel.hpp"
#include "corex/pipeline.hpp"
#include "corex/proximity.hpp"
#include "corex/rca.hpp"
#include "corex/synth.hpp"
#include "corex/transactions.hpp"

namespace fs = std::filesystem;
using corex::i32;
using corex::i64;

namespace {

corex::FirmProductPanel load_panel_file(const std::string& path) {
    std::ifstream in = corex::open_input(path);
    return corex::load_panel(in);
}

// Expands a '*'/'?' glob over the basename; plain paths pass through.
std::vector<std::string> expand_inputs(const std::string& pattern) {
    const fs::path p(pattern);
    const std::string base = p.filename().string();
    if (base.find('*') == std::string::npos && base.find('?') == std::string::npos)
        return {pattern};
    const fs::path dir = p.parent_path().empty() ? fs::path(".") : p.parent_path();
    auto matches = [&](const std::string& name) {
        std::size_t np = 0, nn = 0, star = std::string::npos, star_n = 0;
        while (nn < name.size()) {
            if (np < base.size() && (base[np] == '?' || base[np] == name[nn])) {
                ++np, ++nn;
            } else if (np < base.size() && base[np] == '*') {
                star = np++;
                star_n = nn;
            } else if (star != std::string::npos) {
                np = star + 1;
                nn = ++star_n;
            } else {
                return false;
            }
        }
        while (np < base.size() && base[np] == '*') ++np;
        return np == base.size();
    };
    std::vector<std::string> out;
    if (fs::is_directory(dir))
        for (const auto& e : fs::directory_iterator(dir))
            if (e.is_regular_file() && matches(e.path().filename().string()))
                out.push_back(e.path().string());
    std::sort(out.begin(), out.end());
    if (out.empty()) throw corex::Error("no files match input pattern: " + pattern);
    return out;
}

std::vector<i32> parse_years_arg(const std::string& text) {
    std::vector<i32> years;
    for (const auto& part : corex::split(text, ',')) {
        auto dash = part.find('-');
        i64 a, b;
        if (dash != std::string::npos && dash > 0) {
            if (!corex::parse_int(part.substr(0, dash), a) ||
                !corex::parse_int(part.substr(dash + 1), b) || a > b)
                throw corex::Error("bad year range: " + part);
            for (i64 y = a; y <= b; ++y) years.push_back(i32(y));
        } else {
            if (!corex::parse_int(part, a)) throw corex::Error("bad year: " + part);
            years.push_back(i32(a));
        }
    }
    if (years.empty()) throw corex::Error("empty year list");
    return years;
}

struct IngestArgs {
    std::vector<std::string> inputs;
    std::string config, out_dir;
};

void run_ingest(const IngestArgs& args, int threads) {
    (void)threads;
    corex::KeyValueConfig cfg;
    if (!args.config.empty()) cfg = corex::KeyValueConfig::from_file(args.config);
    corex::TransactionSchema schema;
    schema.delimiter = cfg.get("ingest.delimiter", ",")[0];
    schema.default_country = cfg.get("ingest.country", schema.default_country);
    for (const auto& [k, v] : cfg.section("ingest.columns")) schema.rename[k] = v;

    fs::create_directories(args.out_dir);
    corex::TransactionSet all;
    nlohmann::ordered_json files = nlohmann::ordered_json::array();
    std::vector<std::pair<std::string, corex::RejectedRow>> rejects;
    for (const auto& spec : args.inputs) {
        std::string country = schema.default_country, pattern = spec;
        auto eq = spec.find('=');
        if (eq != std::string::npos) {
            country = spec.substr(0, eq);
            pattern = spec.substr(eq + 1);
        }
        for (const auto& path : expand_inputs(pattern)) {
            corex::TransactionSchema s = schema;
            s.default_country = country;
            std::ifstream in = corex::open_input(path);
            corex::ParseReport report;
            corex::TransactionSet part = corex::parse_transactions(in, s, report);
            for (const auto& r : report.rejects)
                rejects.emplace_back(fs::path(path).filename().string(), r);
            nlohmann::ordered_json f;
            f["path"] = fs::path(path).filename().string();
            f["country"] = country;
            f["rows_read"] = report.rows_read;
            f["rows_ok"] = report.rows_ok;
            f["rejected"] = report.rows_rejected;
            files.push_back(std::move(f));
            all.records.insert(all.records.end(), part.records.begin(),
                               part.records.end());
        }
    }

    i64 re_exports_removed = 0;
    corex::TransactionSet direct = corex::filter_re_exports(all, &re_exports_removed);
    corex::FirmProductPanel panel = corex::aggregate_panel(direct, false);
    auto summaries = corex::firm_summaries(panel);

    nlohmann::ordered_json manifest;
    manifest["files"] = std::move(files);
    manifest["re_exports_removed"] = re_exports_removed;
    manifest["artifacts"] = nlohmann::ordered_json::array();
    auto emit = [&](const std::string& rel, auto&& writer) {
        const fs::path full = fs::path(args.out_dir) / rel;
        {
            std::ofstream out = corex::open_output(full.string());
            writer(out);
        }
        corex::FileDigest d = corex::digest_file(full.string());
        nlohmann::ordered_json a;
        a["path"] = rel;
        a["bytes"] = d.bytes;
        a["checksum"] = corex::checksum_hex(d.checksum);
        manifest["artifacts"].push_back(std::move(a));
    };
    emit("transactions.csv",
         [&](std::ostream& out) { corex::save_transactions(out, all); });
    emit("rejects.csv", [&](std::ostream& out) {
        corex::CsvWriter w(out, {"file", "line", "reason"});
        for (const auto& [file, r] : rejects)
            w.write_row({file, corex::format_int(r.line), r.reason});
    });
    emit("panel.csv", [&](std::ostream& out) { corex::save_panel(out, panel); });
    emit("firm_summaries.csv", [&](std::ostream& out) {
        corex::CsvWriter w(out, {"country", "firm_id", "year", "exports_usd", "log_size",
                                 "np", "nd", "size_quartile", "div_bin"});
        for (const auto& s : summaries)
            w.write_row({s.country, s.firm, corex::format_int(s.year),
                         corex::format_money_cents(s.total_cents),
                         corex::format_g17(s.log_size), corex::format_int(s.np),
                         corex::format_int(s.nd), corex::format_int(s.size_quartile),
                         s.div_bin});
    });
    {
        std::ofstream out =
            corex::open_output((fs::path(args.out_dir) / "ingest_manifest.json").string());
        out << manifest.dump(2) << "\n";
    }
    std::cout << "ingested " << all.size() << " rows into " << args.out_dir << "\n";
}

struct BasketArgs {
    std::string panel, transactions, years, out_dir, coreness;
    int bins = 20;
};

void run_basket(const BasketArgs& args, int threads) {
    (void)threads;
    auto years = parse_years_arg(args.years);
    if (years.size() != 2 || years[1] != years[0] + 1)
        throw corex::Error("--years must name two consecutive years, e.g. 2019,2020");
    const i32 t0 = years[0], t1 = years[1];

    corex::FirmProductPanel panel = load_panel_file(args.panel);
    std::ifstream tin = corex::open_input(args.transactions);
    corex::ParseReport report;
    corex::TransactionSet ts = corex::load_transactions(tin, report);
    ts = corex::filter_re_exports(ts);

    fs::create_directories(args.out_dir);
    std::vector<corex::BasketChangeRecord> changes;
    std::vector<corex::TpvAssignment> tpv;
    std::vector<std::pair<std::string, corex::KeptDroppedFlag>> flags;
    for (corex::u32 c = 0; c < panel.countries.size(); ++c) {
        const std::string& country = panel.countries.name(c);
        auto part = corex::basket_changes(panel, country, t1);
        changes.insert(changes.end(), part.begin(), part.end());
        auto tp = corex::tpv_assignments(ts, country, t0);
        tpv.insert(tpv.end(), tp.begin(), tp.end());
        for (auto& f : corex::kept_dropped(panel, country, t0))
            flags.emplace_back(country, std::move(f));
    }

    auto write_file = [&](const std::string& rel, auto&& writer) {
        std::ofstream out = corex::open_output((fs::path(args.out_dir) / rel).string());
        writer(out);
    };
    write_file("basket_changes.csv", [&](std::ostream& out) {
        corex::CsvWriter w(out, {"country", "firm_id", "year_from", "year_to",
                                 "bray_curtis", "exited"});
        for (const auto& r : changes)
            w.write_row({r.country, r.firm, corex::format_int(r.year_from),
                         corex::format_int(r.year_to), corex::format_g17(r.bray_curtis),
                         r.exited ? "1" : "0"});
    });
    write_file("tpv.csv", [&](std::ostream& out) { corex::save_tpv(out, tpv); });
    write_file("kept_dropped.csv", [&](std::ostream& out) {
        corex::CsvWriter w(out, {"country", "firm_id", "hs6", "year", "dropped"});
        for (const auto& [country, f] : flags)
            w.write_row({country, f.firm, f.product, corex::format_int(f.year),
                         f.dropped ? "1" : "0"});
    });
    write_file("bc_histogram.csv", [&](std::ostream& out) {
        corex::Histogram hist(0.0, 1.0, args.bins);
        for (const auto& r : changes) hist.add(r.bray_curtis);
        corex::CsvWriter w(out, {"lo", "hi", "count"});
        for (std::size_t b = 0; b < hist.counts.size(); ++b)
            w.write_row({corex::format_g17(hist.edge(b)), corex::format_g17(hist.edge(b + 1)),
                         corex::format_int(hist.counts[b])});
    });
    {
        std::vector<corex::FirmSummary> pair_years;
        for (auto& s : corex::firm_summaries(panel))
            if (s.year == t0 || s.year == t1) pair_years.push_back(std::move(s));
        corex::BinnedFit fit = corex::binned_exponential_fit(pair_years, args.bins);
        write_file("diversification_fit.csv", [&](std::ostream& out) {
            corex::CsvWriter w(out, {"bin", "firms", "mean_log_size", "mean_np"});
            for (std::size_t i = 0; i < fit.bins.size(); ++i)
                w.write_row({corex::format_int(i64(i) + 1),
                             corex::format_int(fit.bins[i].firms),
                             corex::format_g17(fit.bins[i].mean_log_size),
                             corex::format_g17(fit.bins[i].mean_np)});
            w.write_row({"_a", "", "", corex::format_g17(fit.a)});
            w.write_row({"_b", "", "", corex::format_g17(fit.b)});
        });
    }
    if (!args.coreness.empty()) {
        std::ifstream cin_ = corex::open_input(args.coreness);
        corex::CorenessTable table = corex::load_coreness(cin_);
        if (table.year != t0)
            throw corex::Error("coreness table is for year " +
                               corex::format_int(table.year) + ", expected " +
                               corex::format_int(t0));
        corex::Histogram kept_h(0.0, 1.0, args.bins), dropped_h(0.0, 1.0, args.bins);
        double kept_sum = 0, dropped_sum = 0;
        i64 kept_n = 0, dropped_n = 0, unmatched = 0;
        for (const auto& [country, f] : flags) {
            if (country != table.country) continue;
            const corex::CorenessRow* row = nullptr;
            for (const auto& r : table.rows)
                if (r.firm == f.firm && r.product == f.product) {
                    row = &r;
                    break;
                }
            if (!row) {
                ++unmatched;
                continue;
            }
            if (f.dropped) {
                dropped_h.add(row->coreness);
                dropped_sum += row->coreness;
                ++dropped_n;
            } else {
                kept_h.add(row->coreness);
                kept_sum += row->coreness;
                ++kept_n;
            }
        }
        if (unmatched > 0)
            throw corex::Error("coreness table is missing " + corex::format_int(unmatched) +
                               " flagged firm-product rows");
        write_file("coreness_by_fate.csv", [&](std::ostream& out) {
            corex::CsvWriter w(out, {"fate", "lo", "hi", "count"});
            for (std::size_t b = 0; b < kept_h.counts.size(); ++b)
                w.write_row({"kept", corex::format_g17(kept_h.edge(b)),
                             corex::format_g17(kept_h.edge(b + 1)),
                             corex::format_int(kept_h.counts[b])});
            for (std::size_t b = 0; b < dropped_h.counts.size(); ++b)
                w.write_row({"dropped", corex::format_g17(dropped_h.edge(b)),
                             corex::format_g17(dropped_h.edge(b + 1)),
                             corex::format_int(dropped_h.counts[b])});
            if (kept_n > 0)
                w.write_row({"kept_mean", "", "", corex::format_g17(kept_sum / double(kept_n))});
            if (dropped_n > 0)
                w.write_row(
                    {"dropped_mean", "", "", corex::format_g17(dropped_sum / double(dropped_n))});
        });
    }
    std::cout << "basket outputs written to " << args.out_dir << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"export coreness analytics pipeline"};
    app.require_subcommand(1);
    app.fallthrough();  // global options may follow the subcommand
    int threads = 1;
    app.add_option("--threads", threads, "worker threads for parallel stages")
        ->capture_default_str();

    // --- synth -------------------------------------------------------------
    auto* synth_cmd = app.add_subcommand("synth", "generate transactions with planted structure");
    std::string synth_config, synth_out, synth_pci;
    synth_cmd->add_option("--config", synth_config, "generator config file");
    synth_cmd->add_option("--out", synth_out, "output transaction file")->required();
    synth_cmd->add_option("--pci", synth_pci, "also write a matching PCI table here");
    synth_cmd->callback([&] {
        corex::SynthConfig cfg;
        if (!synth_config.empty())
            cfg = corex::SynthConfig::from_config(corex::KeyValueConfig::from_file(synth_config));
        cfg.validate();
        corex::TransactionSet ts = corex::generate_transactions(cfg, threads);
        {
            std::ofstream out = corex::open_output(synth_out);
            corex::save_transactions(out, ts);
        }
        if (!synth_pci.empty()) {
            std::ofstream out = corex::open_output(synth_pci);
            corex::save_pci(corex::generate_pci(cfg), out);
        }
        std::cout << "generated " << ts.size() << " rows\n";
    });

    // --- ingest ------------------------------------------------------------
    auto* ingest_cmd = app.add_subcommand("ingest", "parse, validate, and aggregate transactions");
    IngestArgs ingest_args;
    ingest_cmd->add_option("--input", ingest_args.inputs,
                           "input file, glob, or COUNTRY=path (repeatable)")
        ->required();
    ingest_cmd->add_option("--config", ingest_args.config, "schema config file");
    ingest_cmd->add_option("--out", ingest_args.out_dir, "output directory")->required();
    ingest_cmd->callback([&] { run_ingest(ingest_args, threads); });

    // --- proximity ---------------------------------------------------------
    auto* prox_cmd = app.add_subcommand("proximity", "build the product proximity network");
    std::string prox_panel, prox_country, prox_out;
    i32 prox_year = 0;
    prox_cmd->add_option("--panel", prox_panel, "panel file")->required();
    prox_cmd->add_option("--country", prox_country, "country code")->required();
    prox_cmd->add_option("--year", prox_year, "panel year")->required();
    prox_cmd->add_option("--out", prox_out, "output edge list")->required();
    prox_cmd->callback([&] {
        corex::FirmProductPanel panel = load_panel_file(prox_panel);
        corex::RcaMatrix rca = corex::compute_rca(panel, prox_country, prox_year);
        corex::SpecializationMatrix spec = corex::binarize(rca);
        corex::ProximityNetwork net = corex::jaccard_network(spec, panel.products, threads);
        std::ofstream out = corex::open_output(prox_out);
        corex::save_network(out, net);
        std::cout << "network: " << net.products.size() << " products, "
                  << net.edges.size() << " edges\n";
    });

    // --- coreness ----------------------------------------------------------
    auto* core_cmd = app.add_subcommand("coreness", "score products within firm baskets");
    std::string core_panel, core_network, core_out;
    i32 core_year = -1;
    core_cmd->add_option("--panel", core_panel, "panel file")->required();
    core_cmd->add_option("--network", core_network, "proximity network file")->required();
    core_cmd->add_option("--year", core_year, "panel year (default: network year)");
    core_cmd->add_option("--out", core_out, "output file")->required();
    core_cmd->callback([&] {
        corex::FirmProductPanel panel = load_panel_file(core_panel);
        std::ifstream nin = corex::open_input(core_network);
        corex::ProximityNetwork net = corex::load_network(nin);
        const i32 year = core_year < 0 ? net.year : core_year;
        corex::CorenessTable table =
            corex::coreness_table(panel, net, net.country, year, threads);
        std::ofstream out = corex::open_output(core_out);
        corex::save_coreness(out, table);
        std::cout << "coreness: " << table.rows.size() << " firm-product rows\n";
    });

    // --- basket ------------------------------------------------------------
    auto* basket_cmd = app.add_subcommand("basket", "year-over-year basket dynamics");
    BasketArgs basket_args;
    basket_cmd->add_option("--panel", basket_args.panel, "panel file")->required();
    basket_cmd->add_option("--transactions", basket_args.transactions,
                           "transaction file (destination detail for TPV)")
        ->required();
    basket_cmd->add_option("--years", basket_args.years, "consecutive pair, e.g. 2019,2020")
        ->required();
    basket_cmd->add_option("--out", basket_args.out_dir, "output directory")->required();
    basket_cmd->add_option("--coreness", basket_args.coreness,
                           "baseline-year coreness table for the kept/dropped split");
    basket_cmd->add_option("--bins", basket_args.bins, "histogram and fit bins")
        ->capture_default_str();
    basket_cmd->callback([&] { run_basket(basket_args, threads); });

    // --- complexity --------------------------------------------------------
    auto* cplx_cmd = app.add_subcommand("complexity", "average PCI and assign quartiles");
    std::string cplx_pci, cplx_panel, cplx_years, cplx_out;
    cplx_cmd->add_option("--pci", cplx_pci, "PCI input (product,year,pci)")->required();
    cplx_cmd->add_option("--panel", cplx_panel, "panel file (product universe)")->required();
    cplx_cmd->add_option("--years", cplx_years, "years to average (default: panel years)");
    cplx_cmd->add_option("--out", cplx_out, "output file")->required();
    cplx_cmd->callback([&] {
        corex::FirmProductPanel panel = load_panel_file(cplx_panel);
        std::vector<i32> years =
            cplx_years.empty() ? panel.years : parse_years_arg(cplx_years);
        std::ifstream in = corex::open_input(cplx_pci);
        corex::ComplexityTable table = corex::load_pci(in, years);
        std::vector<std::string> universe;
        for (corex::u32 p = 0; p < panel.products.size(); ++p)
            universe.push_back(panel.products.name(p));
        corex::quartile_assign(table, std::move(universe));
        std::ofstream out = corex::open_output(cplx_out);
        corex::save_complexity(out, table);
        std::cout << "complexity: " << table.rows.size() << " products, "
                  << table.flagged.size() << " without usable values\n";
    });

    // --- frames ------------------------------------------------------------
    auto* frames_cmd = app.add_subcommand("frames", "assemble the regression frames");
    std::string fr_panel, fr_tpv, fr_complexity, fr_out, fr_years;
    std::vector<std::string> fr_coreness;
    i32 fr_crisis = 2020;
    bool fr_single = false;
    frames_cmd->add_option("--panel", fr_panel, "panel file")->required();
    frames_cmd->add_option("--coreness", fr_coreness, "coreness tables (repeatable)")
        ->required();
    frames_cmd->add_option("--tpv", fr_tpv, "TPV assignment file");
    frames_cmd->add_option("--complexity", fr_complexity, "complexity table")->required();
    frames_cmd->add_option("--years", fr_years, "estimation years (default: all with a lag)");
    frames_cmd->add_option("--crisis-year", fr_crisis, "crisis dummy year")
        ->capture_default_str();
    frames_cmd->add_flag("--include-single", fr_single,
                         "keep single-product firms in the flow frame");
    frames_cmd->add_option("--out", fr_out, "output directory")->required();
    frames_cmd->callback([&] {
        corex::FirmProductPanel panel = load_panel_file(fr_panel);
        std::vector<std::unique_ptr<corex::CorenessTable>> tables;
        for (const auto& path : fr_coreness) {
            std::ifstream in = corex::open_input(path);
            tables.push_back(
                std::make_unique<corex::CorenessTable>(corex::load_coreness(in)));
        }
        std::vector<corex::TpvAssignment> tpv;
        if (!fr_tpv.empty()) {
            std::ifstream in = corex::open_input(fr_tpv);
            tpv = corex::load_tpv(in);
        }
        std::ifstream cin_ = corex::open_input(fr_complexity);
        corex::ComplexityTable complexity = corex::load_complexity(cin_);

        corex::FrameInputs inputs;
        inputs.panel = &panel;
        for (const auto& t : tables) inputs.coreness.push_back(t.get());
        inputs.tpv = &tpv;
        inputs.complexity = &complexity;
        corex::FrameOptions opt;
        if (!fr_years.empty()) opt.years = parse_years_arg(fr_years);
        opt.crisis_year = fr_crisis;
        opt.include_single = fr_single;

        fs::create_directories(fr_out);
        auto emit = [&](const std::string& name,
                        std::pair<corex::RegressionFrame, corex::DropCounts> built) {
            {
                std::ofstream out =
                    corex::open_output((fs::path(fr_out) / ("frame_" + name + ".csv")).string());
                corex::save_frame(out, built.first);
            }
            std::ofstream out = corex::open_output(
                (fs::path(fr_out) / ("frame_" + name + "_drops.csv")).string());
            corex::save_drops(out, built.second);
            std::cout << "frame_" << name << ": " << built.first.n() << " rows\n";
        };
        emit("firm", corex::build_firm_frame(inputs, opt));
        emit("country", corex::build_country_frame(inputs, opt));
        emit("logit", corex::build_logit_frame(inputs, opt));
    });

    // --- estimate ----------------------------------------------------------
    auto* est_cmd = app.add_subcommand("estimate", "fit a model on a regression frame");
    std::string est_frame, est_model, est_spec, est_out;
    est_cmd->add_option("--frame", est_frame, "frame file")->required();
    est_cmd->add_option("--model", est_model, "ppml, logit, or ols")->required();
    est_cmd->add_option("--spec", est_spec, "estimation spec file");
    est_cmd->add_option("--out", est_out, "coefficient table output")->required();
    est_cmd->callback([&] {
        std::ifstream fin = corex::open_input(est_frame);
        corex::RegressionFrame frame = corex::load_frame(fin);
        corex::ModelSpec spec;
        if (est_spec.empty())
            spec = corex::ModelSpec::defaults_for(frame);
        else
            spec = corex::load_model_spec(corex::KeyValueConfig::from_file(est_spec), frame);
        corex::FitResult fit;
        if (est_model == "ppml")
            fit = corex::ppml_fit(frame, spec, threads);
        else if (est_model == "logit")
            fit = corex::logit_fit(frame, spec, threads);
        else if (est_model == "ols")
            fit = corex::ols_fit(frame, spec, threads);
        else
            throw corex::Error("unknown model '" + est_model + "' (ppml, logit, ols)");
        std::ofstream out = corex::open_output(est_out);
        corex::save_fit(out, fit);
        std::cout << est_model << ": n=" << fit.n_obs << " k=" << fit.names.size()
                  << " iterations=" << fit.iterations << "\n";
    });

    // --- run ---------------------------------------------------------------
    auto* run_cmd = app.add_subcommand("run", "execute the full pipeline from a config");
    std::string run_config, run_out;
    run_cmd->add_option("--config", run_config, "pipeline config file")->required();
    run_cmd->add_option("--out", run_out, "override the configured output directory");
    run_cmd->callback([&] {
        corex::KeyValueConfig raw = corex::KeyValueConfig::from_file(run_config);
        corex::PipelineConfig cfg = corex::PipelineConfig::from_config(raw);
        if (!run_out.empty()) cfg.output_dir = run_out;
        int run_threads = threads;
        if (app.count("--threads") == 0)
            run_threads = int(raw.get_int("pipeline.threads", 1));
        corex::PipelineResult result = corex::run_pipeline(cfg, run_threads);
        if (!result.ok) {
            nlohmann::ordered_json err;
            err["error"]["command"] = "run";
            err["error"]["stage"] = result.failed_stage;
            err["error"]["message"] = result.error;
            std::cerr << err.dump() << "\n";
            std::exit(2);
        }
        std::cout << "manifest: " << result.manifest_path << "\n";
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        nlohmann::ordered_json err;
        std::string command;
        for (const auto* sub : app.get_subcommands()) command = sub->get_name();
        err["error"]["command"] = command.empty() ? "corex" : command;
        err["error"]["message"] = e.what();
        std::cerr << err.dump() << "\n";
        return 1;
    }
    return 0;
}
