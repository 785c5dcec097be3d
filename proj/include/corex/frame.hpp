#pragma once
// Regression frames: column-oriented tables with identifier columns, one
// outcome, numeric covariates, categorical fixed-effect labels, and
// optional row weights. The text format prefixes each header with its role
// (k:, y:, x:, fe:, w:) so a frame file is self-describing.

#include <algorithm>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "corex/common.hpp"
#include "corex/config.hpp"
#include "corex/csv.hpp"

namespace corex {

struct RegressionFrame {
    std::vector<std::string> key_names;
    std::vector<std::vector<std::string>> key_cols;  // parallel to key_names
    std::string outcome_name;
    std::vector<double> outcome;
    std::vector<std::string> covariate_names;
    std::vector<std::vector<double>> covariates;  // parallel to covariate_names
    std::vector<std::string> fe_names;
    std::vector<std::vector<std::string>> fe_cols;  // parallel to fe_names
    std::vector<double> weights;                    // empty = unweighted

    std::size_t n() const { return outcome.size(); }

    int covariate_index(std::string_view name) const {
        for (std::size_t i = 0; i < covariate_names.size(); ++i)
            if (covariate_names[i] == name) return int(i);
        return -1;
    }
    int fe_index(std::string_view name) const {
        for (std::size_t i = 0; i < fe_names.size(); ++i)
            if (fe_names[i] == name) return int(i);
        return -1;
    }

    void check_consistent() const {
        for (const auto& c : key_cols)
            if (c.size() != n()) throw Error("frame key column length mismatch");
        for (const auto& c : covariates)
            if (c.size() != n()) throw Error("frame covariate length mismatch");
        for (const auto& c : fe_cols)
            if (c.size() != n()) throw Error("frame fixed-effect column length mismatch");
        if (!weights.empty() && weights.size() != n())
            throw Error("frame weight column length mismatch");
    }
};

// Itemized row drops produced while assembling or estimating a frame.
using DropCounts = std::vector<std::pair<std::string, i64>>;

inline void count_drop(DropCounts& drops, const std::string& reason, i64 by = 1) {
    for (auto& [r, c] : drops)
        if (r == reason) { c += by; return; }
    drops.emplace_back(reason, by);
}

// ---------------------------------------------------------------------------
// Serialization.

inline void save_frame(std::ostream& out, const RegressionFrame& frame) {
    frame.check_consistent();
    std::vector<std::string> header;
    for (const auto& k : frame.key_names) header.push_back("k:" + k);
    header.push_back("y:" + frame.outcome_name);
    for (const auto& x : frame.covariate_names) header.push_back("x:" + x);
    for (const auto& f : frame.fe_names) header.push_back("fe:" + f);
    if (!frame.weights.empty()) header.push_back("w:weight");

    CsvWriter w(out, header);
    std::vector<std::string> row(header.size());
    for (std::size_t i = 0; i < frame.n(); ++i) {
        std::size_t c = 0;
        for (const auto& col : frame.key_cols) row[c++] = col[i];
        row[c++] = format_g17(frame.outcome[i]);
        for (const auto& col : frame.covariates) row[c++] = format_g17(col[i]);
        for (const auto& col : frame.fe_cols) row[c++] = col[i];
        if (!frame.weights.empty()) row[c++] = format_g17(frame.weights[i]);
        w.write_row(row);
    }
}

inline RegressionFrame load_frame(std::istream& in) {
    CsvReader reader(in);
    RegressionFrame frame;
    struct Slot {
        char role;  // 'k', 'y', 'x', 'f', 'w'
        std::size_t index;
    };
    std::vector<Slot> slots;
    int outcome_slots = 0, weight_slots = 0;
    for (const auto& name : reader.columns()) {
        if (name.rfind("k:", 0) == 0) {
            slots.push_back({'k', frame.key_names.size()});
            frame.key_names.push_back(name.substr(2));
            frame.key_cols.emplace_back();
        } else if (name.rfind("y:", 0) == 0) {
            slots.push_back({'y', 0});
            frame.outcome_name = name.substr(2);
            ++outcome_slots;
        } else if (name.rfind("x:", 0) == 0) {
            slots.push_back({'x', frame.covariate_names.size()});
            frame.covariate_names.push_back(name.substr(2));
            frame.covariates.emplace_back();
        } else if (name.rfind("fe:", 0) == 0) {
            slots.push_back({'f', frame.fe_names.size()});
            frame.fe_names.push_back(name.substr(3));
            frame.fe_cols.emplace_back();
        } else if (name.rfind("w:", 0) == 0) {
            slots.push_back({'w', 0});
            ++weight_slots;
        } else {
            throw Error("frame column '" + name + "' lacks a role prefix");
        }
    }
    if (outcome_slots != 1) throw Error("frame needs exactly one y: column");
    if (weight_slots > 1) throw Error("frame has more than one w: column");

    std::vector<std::string> row;
    while (reader.next(row)) {
        if (row.size() != slots.size())
            throw Error("frame line " + format_int(reader.line_no()) + ": wrong field count");
        for (std::size_t c = 0; c < slots.size(); ++c) {
            const Slot& s = slots[c];
            if (s.role == 'k') {
                frame.key_cols[s.index].push_back(std::string(trim(row[c])));
            } else if (s.role == 'f') {
                frame.fe_cols[s.index].push_back(std::string(trim(row[c])));
            } else {
                double v;
                if (!parse_double(row[c], v))
                    throw Error("frame line " + format_int(reader.line_no()) +
                                ": bad numeric value");
                if (s.role == 'y') frame.outcome.push_back(v);
                else if (s.role == 'x') frame.covariates[s.index].push_back(v);
                else frame.weights.push_back(v);
            }
        }
    }
    frame.check_consistent();
    return frame;
}

inline void save_drops(std::ostream& out, const DropCounts& drops) {
    CsvWriter w(out, {"reason", "rows"});
    for (const auto& [reason, count] : drops) w.write_row({reason, format_int(count)});
}

// ---------------------------------------------------------------------------
// Model specification: which frame columns enter the fit and how.

struct ModelSpec {
    std::string outcome;                     // default: the frame's y column
    std::vector<std::string> covariates;     // default: all x columns
    std::vector<std::pair<std::string, std::string>> interactions;  // products of x columns
    std::vector<std::string> fixed_effects;  // default: none
    std::string weight_column;               // "weight" to use the w column
    bool intercept = true;
    int max_iter = 100;

    static ModelSpec defaults_for(const RegressionFrame& frame) {
        ModelSpec spec;
        spec.outcome = frame.outcome_name;
        spec.covariates = frame.covariate_names;
        if (!frame.weights.empty()) spec.weight_column = "weight";
        return spec;
    }
};

inline std::vector<std::string> parse_name_list(std::string_view text) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : text) {
        if (ch == ',' || ch == ' ' || ch == '\t') {
            if (!cur.empty()) out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

// Reads a model spec from a key-value file; unset keys fall back to the
// frame defaults. `interactions` entries are a*b pairs of covariate names.
inline ModelSpec load_model_spec(const KeyValueConfig& cfg, const RegressionFrame& frame) {
    ModelSpec spec = ModelSpec::defaults_for(frame);
    if (cfg.has("outcome")) spec.outcome = cfg.get("outcome");
    if (cfg.has("covariates")) spec.covariates = parse_name_list(cfg.get("covariates"));
    if (cfg.has("fixed_effects"))
        spec.fixed_effects = parse_name_list(cfg.get("fixed_effects"));
    if (cfg.has("weights")) spec.weight_column = cfg.get("weights");
    spec.intercept = cfg.get_bool("intercept", spec.intercept);
    spec.max_iter = int(cfg.get_int("max_iter", spec.max_iter));
    if (cfg.has("interactions")) {
        for (const auto& term : parse_name_list(cfg.get("interactions"))) {
            auto star = term.find('*');
            if (star == std::string::npos || star == 0 || star + 1 == term.size())
                throw Error("interaction term '" + term + "' is not of the form a*b");
            spec.interactions.emplace_back(term.substr(0, star), term.substr(star + 1));
        }
    }
    return spec;
}

}  // namespace corex
