#pragma once
// End-to-end pipeline: generate or ingest transactions, aggregate, compute
// metrics and dynamics, join complexity, build frames, and fit the three
// estimators — all from one config file. Every artifact is a flat file in
// the output directory, and manifest.json records each one with a content
// checksum. Output bytes depend only on the config and inputs, never on
// thread count or wall-clock time.

#include <filesystem>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "corex/basket.hpp"
#include "corex/checksum.hpp"
#include "corex/complexity.hpp"
#include "corex/config.hpp"
#include "corex/coreness.hpp"
#include "corex/csv.hpp"
#include "corex/descriptives.hpp"
#include "corex/estimators.hpp"
#include "corex/frame.hpp"
#include "corex/frames_build.hpp"
#include "corex/panel.hpp"
#include "corex/proximity.hpp"
#include "corex/rca.hpp"
#include "corex/synth.hpp"
#include "corex/transactions.hpp"

namespace corex {

using ordered_json = nlohmann::ordered_json;

struct PipelineConfig {
    std::string mode;        // "synth" or "ingest"
    std::string output_dir;
    std::vector<std::pair<std::string, std::string>> inputs;  // country -> path
    std::string granularity = "annual";  // "quarterly" adds a quarter-level table
    i64 year_from = 0;  // 0 = no restriction
    i64 year_to = 0;
    std::string pci_path;  // optional in synth mode (generated alongside)
    i32 crisis_year = 2020;
    bool include_single = false;
    int descriptive_bins = 20;
    std::map<std::string, bool> stage_on;  // descriptives, coreness, basket,
                                           // complexity, frames, estimate
    TransactionSchema schema;
    SynthConfig synth;
    KeyValueConfig raw;

    bool stage(const std::string& name) const {
        auto it = stage_on.find(name);
        return it == stage_on.end() ? true : it->second;
    }

    static PipelineConfig from_config(const KeyValueConfig& cfg) {
        PipelineConfig p;
        p.raw = cfg;
        p.inputs = cfg.section("inputs");
        p.mode = cfg.get("pipeline.mode", p.inputs.empty() ? "synth" : "ingest");
        p.output_dir = cfg.get("pipeline.output_dir", "");
        p.granularity = cfg.get("pipeline.granularity", "annual");
        p.year_from = cfg.get_int("pipeline.year_from", 0);
        p.year_to = cfg.get_int("pipeline.year_to", 0);
        p.pci_path = cfg.get("pipeline.pci", "");
        p.crisis_year = i32(cfg.get_int("pipeline.crisis_year", 2020));
        p.include_single = cfg.get_bool("frames.include_single", false);
        p.descriptive_bins = int(cfg.get_int("descriptives.n_bins", 20));
        for (const char* s :
             {"descriptives", "coreness", "basket", "complexity", "frames", "estimate"})
            p.stage_on[s] = cfg.get_bool(std::string("stages.") + s, true);
        p.schema.delimiter = cfg.get("ingest.delimiter", ",")[0];
        for (const auto& [k, v] : cfg.section("ingest.columns")) p.schema.rename[k] = v;
        if (p.mode == "synth") {
            p.synth = SynthConfig::from_config(cfg);
            if (cfg.has("pipeline.seed")) p.synth.seed = u64(cfg.get_int("pipeline.seed"));
        }
        return p;
    }

    void validate() const {
        namespace fs = std::filesystem;
        if (mode != "synth" && mode != "ingest")
            throw Error("pipeline.mode must be 'synth' or 'ingest'");
        if (output_dir.empty()) throw Error("pipeline.output_dir is required");
        if (granularity != "annual" && granularity != "quarterly")
            throw Error("pipeline.granularity must be 'annual' or 'quarterly'");
        if ((year_from == 0) != (year_to == 0))
            throw Error("year range requires both pipeline.year_from and pipeline.year_to");
        if (year_from != 0 && year_from > year_to)
            throw Error("empty year range: year_from exceeds year_to");
        if (mode == "ingest") {
            if (inputs.empty()) throw Error("ingest mode needs at least one [inputs] entry");
            for (const auto& [country, path] : inputs)
                if (!fs::exists(path))
                    throw Error("input file not found for " + country + ": " + path);
        }
        if (stage("complexity")) {
            if (!pci_path.empty() && !fs::exists(pci_path))
                throw Error("PCI file not found: " + pci_path);
            if (pci_path.empty() && mode != "synth")
                throw Error("complexity stage enabled but no pipeline.pci path given");
        }
        if (stage("estimate") && !stage("frames"))
            throw Error("stage 'estimate' requires stage 'frames'");
        if (stage("frames")) {
            for (const char* dep : {"coreness", "basket", "complexity"})
                if (!stage(dep))
                    throw Error(std::string("stage 'frames' requires stage '") + dep + "'");
        }
    }
};

struct PipelineResult {
    ordered_json manifest;
    std::string manifest_path;
    bool ok = false;
    std::string failed_stage;
    std::string error;
};

namespace pipeline_detail {

// Records one output file in the current stage's artifact list.
struct ArtifactSink {
    std::filesystem::path dir;
    ordered_json* stage = nullptr;

    template <typename Fn>
    void emit(const std::string& rel, Fn&& writer) {
        const std::filesystem::path full = dir / rel;
        {
            std::ofstream out = open_output(full.string());
            writer(out);
        }
        FileDigest d = digest_file(full.string());
        ordered_json a;
        a["path"] = rel;
        a["bytes"] = d.bytes;
        a["checksum"] = checksum_hex(d.checksum);
        (*stage)["artifacts"].push_back(std::move(a));
    }
};

inline KeyValueConfig subsection(const KeyValueConfig& cfg, const std::string& prefix) {
    KeyValueConfig sub;
    for (const auto& [k, v] : cfg.section(prefix)) sub.set(k, v);
    return sub;
}

// Estimation spec for one model: frame defaults, chapter fixed effects,
// then any [estimate.<name>] overrides from the pipeline config.
inline ModelSpec pipeline_spec(const KeyValueConfig& raw, const std::string& name,
                               const RegressionFrame& frame) {
    KeyValueConfig sub = subsection(raw, "estimate." + name);
    if (!sub.has("fixed_effects")) sub.set("fixed_effects", "hs2");
    return load_model_spec(sub, frame);
}

}  // namespace pipeline_detail

inline PipelineResult run_pipeline(const PipelineConfig& cfg, int threads = 1) {
    namespace fs = std::filesystem;
    using pipeline_detail::ArtifactSink;
    cfg.validate();
    fs::create_directories(cfg.output_dir);

    PipelineResult result;
    ordered_json& manifest = result.manifest;
    manifest["mode"] = cfg.mode;
    manifest["granularity"] = cfg.granularity;
    if (cfg.mode == "synth") manifest["seed"] = cfg.synth.seed;
    manifest["config_checksum"] = checksum_hex(fnv1a64(cfg.raw.canonical_text()));
    manifest["stages"] = ordered_json::array();

    // State threaded through the stages.
    TransactionSet transactions;
    FirmProductPanel panel;
    std::vector<std::unique_ptr<CorenessTable>> coreness_tables;
    std::vector<TpvAssignment> tpv_all;
    ComplexityTable complexity;
    RegressionFrame frame_firm, frame_country, frame_logit;
    std::vector<std::pair<std::string, i32>> country_years;

    const std::string failed_marker = "failed";
    auto run_stage = [&](const std::string& name, auto&& body) {
        if (!result.error.empty()) return;
        ordered_json stage;
        stage["name"] = name;
        stage["artifacts"] = ordered_json::array();
        ArtifactSink sink{fs::path(cfg.output_dir), &stage};
        try {
            body(sink, stage);
            stage["status"] = "ok";
        } catch (const std::exception& e) {
            stage["status"] = failed_marker;
            stage["error"] = e.what();
            result.failed_stage = name;
            result.error = e.what();
        }
        manifest["stages"].push_back(std::move(stage));
    };

    // --- source stage: synthesize or ingest transaction rows ---------------
    if (cfg.mode == "synth") {
        run_stage("synth", [&](ArtifactSink& sink, ordered_json& stage) {
            transactions = generate_transactions(cfg.synth, threads);
            sink.emit("transactions.csv",
                      [&](std::ostream& out) { save_transactions(out, transactions); });
            auto pci = generate_pci(cfg.synth);
            sink.emit("pci.csv", [&](std::ostream& out) { save_pci(pci, out); });
            stage["rows"] = i64(transactions.size());
        });
    } else {
        run_stage("ingest", [&](ArtifactSink& sink, ordered_json& stage) {
            ordered_json per_country = ordered_json::array();
            std::vector<std::pair<std::string, RejectedRow>> rejects;
            for (const auto& [country, path] : cfg.inputs) {
                TransactionSchema schema = cfg.schema;
                schema.default_country = country;
                std::ifstream in = open_input(path);
                ParseReport report;
                TransactionSet part = parse_transactions(in, schema, report);
                for (const auto& r : report.rejects) rejects.emplace_back(country, r);
                ordered_json c;
                c["country"] = country;
                c["rows_read"] = report.rows_read;
                c["rows_ok"] = report.rows_ok;
                c["rejected"] = report.rows_rejected;
                per_country.push_back(std::move(c));
                transactions.records.insert(transactions.records.end(),
                                            part.records.begin(), part.records.end());
            }
            sink.emit("transactions.csv",
                      [&](std::ostream& out) { save_transactions(out, transactions); });
            sink.emit("rejects.csv", [&](std::ostream& out) {
                CsvWriter w(out, {"country", "line", "reason"});
                for (const auto& [country, r] : rejects)
                    w.write_row({country, format_int(r.line), r.reason});
            });
            stage["files"] = std::move(per_country);
        });
    }

    // --- aggregate: re-export filter, year range, firm-product panel -------
    run_stage("aggregate", [&](ArtifactSink& sink, ordered_json& stage) {
        i64 re_exports_removed = 0;
        TransactionSet kept = filter_re_exports(transactions, &re_exports_removed);
        i64 outside_range = 0;
        if (cfg.year_from != 0) {
            TransactionSet in_range;
            in_range.records.reserve(kept.records.size());
            for (auto& t : kept.records) {
                if (t.year < cfg.year_from || t.year > cfg.year_to)
                    ++outside_range;
                else
                    in_range.records.push_back(std::move(t));
            }
            kept = std::move(in_range);
        }
        transactions = std::move(kept);
        panel = aggregate_panel(transactions, /*quarterly=*/false);
        sink.emit("panel.csv", [&](std::ostream& out) { save_panel(out, panel); });
        if (cfg.granularity == "quarterly") {
            auto quarters = quarterly_aggregates(transactions);
            sink.emit("quarterly_totals.csv", [&](std::ostream& out) {
                CsvWriter w(out, {"country", "year", "quarter", "total_usd", "exporters",
                                  "firm_products"});
                for (const auto& q : quarters)
                    w.write_row({q.country, format_int(q.year), format_int(q.quarter),
                           format_money_cents(q.total_cents), format_int(q.exporters),
                           format_int(q.firm_products)});
            });
        }
        stage["re_exports_removed"] = re_exports_removed;
        stage["rows_outside_year_range"] = outside_range;
        stage["cells"] = i64(panel.cells.size());
        std::set<std::pair<std::string, i32>> seen;
        for (const auto& m : panel.firm_marginals)
            seen.insert({panel.countries.name(m.country), m.year});
        country_years.assign(seen.begin(), seen.end());
    });

    // --- descriptives: firm summaries, diversification, size quartiles -----
    if (cfg.stage("descriptives")) {
        run_stage("descriptives", [&](ArtifactSink& sink, ordered_json&) {
            auto summaries = firm_summaries(panel);
            sink.emit("firm_summaries.csv", [&](std::ostream& out) {
                CsvWriter w(out, {"country", "firm_id", "year", "exports_usd", "log_size",
                                  "np", "nd", "size_quartile", "div_bin"});
                for (const auto& s : summaries)
                    w.write_row({s.country, s.firm, format_int(s.year),
                           format_money_cents(s.total_cents), format_g17(s.log_size),
                           format_int(s.np), format_int(s.nd), format_int(s.size_quartile),
                           s.div_bin});
            });
            sink.emit("diversification.csv", [&](std::ostream& out) {
                CsvWriter w(out, {"country", "year", "div_bin", "firms", "exports_usd",
                                  "firm_share_pct", "export_share_pct", "mean_nd",
                                  "median_exports_usd"});
                for (i32 year : panel.years)
                    for (const auto& r : diversification_table(panel, year))
                        w.write_row({r.country, format_int(r.year), r.bin, format_int(r.firms),
                               format_money_cents(r.total_cents),
                               format_g17(r.firm_share_pct), format_g17(r.export_share_pct),
                               format_g17(r.mean_nd), format_g17(r.median_exports_usd)});
            });
            sink.emit("size_quartiles.csv", [&](std::ostream& out) {
                CsvWriter w(out, {"country", "year", "quartile", "firms", "exports_usd",
                                  "mean_exports_usd", "mean_np", "mean_nd"});
                for (const auto& r : size_quartile_table(summaries))
                    w.write_row({r.country, format_int(r.year), format_int(r.quartile),
                           format_int(r.firms), format_money_cents(r.total_cents),
                           format_g17(r.mean_exports_usd), format_g17(r.mean_np),
                           format_g17(r.mean_nd)});
            });
            BinnedFit fit = binned_exponential_fit(summaries, cfg.descriptive_bins);
            sink.emit("diversification_fit.csv", [&](std::ostream& out) {
                CsvWriter w(out, {"bin", "firms", "mean_log_size", "mean_np"});
                for (std::size_t i = 0; i < fit.bins.size(); ++i)
                    w.write_row({format_int(i64(i) + 1), format_int(fit.bins[i].firms),
                           format_g17(fit.bins[i].mean_log_size),
                           format_g17(fit.bins[i].mean_np)});
                w.write_row({"_a", "", "", format_g17(fit.a)});
                w.write_row({"_b", "", "", format_g17(fit.b)});
            });
        });
    }

    // --- coreness: per country-year proximity network and coreness ---------
    if (cfg.stage("coreness")) {
        run_stage("coreness", [&](ArtifactSink& sink, ordered_json&) {
            for (const auto& [country, year] : country_years) {
                RcaMatrix rca = compute_rca(panel, country, year);
                SpecializationMatrix spec = binarize(rca);
                ProximityNetwork net = jaccard_network(spec, panel.products, threads);
                const std::string tag = country + "_" + format_int(year);
                sink.emit("network_" + tag + ".csv",
                          [&](std::ostream& out) { save_network(out, net); });
                auto table = std::make_unique<CorenessTable>(
                    coreness_table(panel, net, country, year, threads));
                sink.emit("coreness_" + tag + ".csv",
                          [&](std::ostream& out) { save_coreness(out, *table); });
                coreness_tables.push_back(std::move(table));
            }
        });
    }

    // --- basket: year-over-year similarity, TPV, kept/dropped flags --------
    if (cfg.stage("basket")) {
        run_stage("basket", [&](ArtifactSink& sink, ordered_json&) {
            std::vector<BasketChangeRecord> changes;
            std::vector<std::pair<std::string, KeptDroppedFlag>> flags;
            for (const auto& [country, year] : country_years) {
                auto tpv = tpv_assignments(transactions, country, year);
                tpv_all.insert(tpv_all.end(), tpv.begin(), tpv.end());
                bool has_prev = false;
                for (const auto& cy : country_years)
                    if (cy.first == country && cy.second == year - 1) has_prev = true;
                if (has_prev) {
                    auto part = basket_changes(panel, country, year);
                    changes.insert(changes.end(), part.begin(), part.end());
                    for (auto& f : kept_dropped(panel, country, year - 1))
                        flags.emplace_back(country, std::move(f));
                }
            }
            sink.emit("basket_changes.csv", [&](std::ostream& out) {
                CsvWriter w(out, {"country", "firm_id", "year_from", "year_to",
                                  "bray_curtis", "exited"});
                for (const auto& r : changes)
                    w.write_row({r.country, r.firm, format_int(r.year_from),
                           format_int(r.year_to), format_g17(r.bray_curtis),
                           r.exited ? "1" : "0"});
            });
            sink.emit("tpv.csv", [&](std::ostream& out) { save_tpv(out, tpv_all); });
            sink.emit("kept_dropped.csv", [&](std::ostream& out) {
                CsvWriter w(out, {"country", "firm_id", "hs6", "year", "dropped"});
                for (const auto& [country, f] : flags)
                    w.write_row({country, f.firm, f.product, format_int(f.year),
                           f.dropped ? "1" : "0"});
            });
        });
    }

    // --- complexity: PCI averaging and quartiles over the panel universe ---
    if (cfg.stage("complexity")) {
        run_stage("complexity", [&](ArtifactSink& sink, ordered_json&) {
            std::string path = cfg.pci_path;
            if (path.empty())
                path = (fs::path(cfg.output_dir) / "pci.csv").string();
            std::ifstream in = open_input(path);
            complexity = load_pci(in, panel.years);
            std::vector<std::string> universe;
            for (u32 p = 0; p < panel.products.size(); ++p)
                universe.push_back(panel.products.name(p));
            quartile_assign(complexity, std::move(universe));
            sink.emit("complexity.csv",
                      [&](std::ostream& out) { save_complexity(out, complexity); });
        });
    }

    // --- frames: the three regression frames with drop accounting ----------
    if (cfg.stage("frames")) {
        run_stage("frames", [&](ArtifactSink& sink, ordered_json&) {
            FrameInputs in;
            in.panel = &panel;
            for (const auto& t : coreness_tables) in.coreness.push_back(t.get());
            in.tpv = &tpv_all;
            in.complexity = &complexity;
            FrameOptions opt;
            opt.crisis_year = cfg.crisis_year;
            opt.include_single = cfg.include_single;

            auto emit_frame = [&](const std::string& name,
                                  std::pair<RegressionFrame, DropCounts> built,
                                  RegressionFrame& slot) {
                slot = std::move(built.first);
                sink.emit("frame_" + name + ".csv",
                          [&](std::ostream& out) { save_frame(out, slot); });
                sink.emit("frame_" + name + "_drops.csv",
                          [&](std::ostream& out) { save_drops(out, built.second); });
            };
            emit_frame("firm", build_firm_frame(in, opt), frame_firm);
            emit_frame("country", build_country_frame(in, opt), frame_country);
            emit_frame("logit", build_logit_frame(in, opt), frame_logit);
        });
    }

    // --- estimate: PPML, weighted OLS, logit -------------------------------
    if (cfg.stage("estimate")) {
        run_stage("estimate", [&](ArtifactSink& sink, ordered_json&) {
            using pipeline_detail::pipeline_spec;
            FitResult ppml =
                ppml_fit(frame_firm, pipeline_spec(cfg.raw, "firm", frame_firm), threads);
            sink.emit("estimate_firm.csv",
                      [&](std::ostream& out) { save_fit(out, ppml); });
            FitResult ols = ols_fit(frame_country,
                                    pipeline_spec(cfg.raw, "country", frame_country),
                                    threads);
            sink.emit("estimate_country.csv",
                      [&](std::ostream& out) { save_fit(out, ols); });
            FitResult logit =
                logit_fit(frame_logit, pipeline_spec(cfg.raw, "logit", frame_logit), threads);
            sink.emit("estimate_logit.csv",
                      [&](std::ostream& out) { save_fit(out, logit); });
        });
    }

    result.ok = result.error.empty();
    manifest["status"] = result.ok ? "ok" : "failed";
    if (!result.ok) {
        manifest["failed_stage"] = result.failed_stage;
        manifest["error"] = result.error;
    }
    const fs::path mpath = fs::path(cfg.output_dir) / "manifest.json";
    {
        std::ofstream out = open_output(mpath.string());
        out << manifest.dump(2) << "\n";
    }
    result.manifest_path = mpath.string();
    return result;
}

}  // namespace corex
