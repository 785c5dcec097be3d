#pragma once
// Plain-text key=value config files with [section] headers and '#' comments.
// Section names are folded into keys as "section.key". Used for pipeline
// configs, generator configs, and estimation spec files.

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "corex/common.hpp"

namespace corex {

class KeyValueConfig {
public:
    KeyValueConfig() = default;

    static KeyValueConfig from_stream(std::istream& in) {
        KeyValueConfig cfg;
        std::string line, section;
        i64 line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            std::string_view sv = trim(line);
            if (sv.empty() || sv[0] == '#' || sv[0] == ';') continue;
            if (sv.front() == '[') {
                if (sv.back() != ']')
                    throw Error("config line " + format_int(line_no) + ": unterminated section header");
                section = std::string(trim(sv.substr(1, sv.size() - 2)));
                continue;
            }
            auto eq = sv.find('=');
            if (eq == std::string_view::npos)
                throw Error("config line " + format_int(line_no) + ": expected key=value");
            std::string key(trim(sv.substr(0, eq)));
            std::string value(trim(sv.substr(eq + 1)));
            if (key.empty())
                throw Error("config line " + format_int(line_no) + ": empty key");
            if (!section.empty()) key = section + "." + key;
            cfg.values_[key] = value;
        }
        return cfg;
    }

    static KeyValueConfig from_file(const std::string& path) {
        std::ifstream f(path);
        if (!f) throw Error("cannot open config file: " + path);
        return from_stream(f);
    }

    bool has(const std::string& key) const { return values_.count(key) > 0; }

    std::string get(const std::string& key) const {
        auto it = values_.find(key);
        if (it == values_.end()) throw Error("missing config key '" + key + "'");
        return it->second;
    }

    std::string get(const std::string& key, const std::string& dflt) const {
        auto it = values_.find(key);
        return it == values_.end() ? dflt : it->second;
    }

    i64 get_int(const std::string& key) const {
        i64 v;
        if (!parse_int(get(key), v)) throw Error("config key '" + key + "' is not an integer");
        return v;
    }

    i64 get_int(const std::string& key, i64 dflt) const {
        return has(key) ? get_int(key) : dflt;
    }

    double get_double(const std::string& key) const {
        double v;
        if (!parse_double(get(key), v)) throw Error("config key '" + key + "' is not a number");
        return v;
    }

    double get_double(const std::string& key, double dflt) const {
        return has(key) ? get_double(key) : dflt;
    }

    bool get_bool(const std::string& key, bool dflt) const {
        if (!has(key)) return dflt;
        std::string v = get(key);
        if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
        if (v == "0" || v == "false" || v == "no" || v == "off") return false;
        throw Error("config key '" + key + "' is not a boolean");
    }

    void set(const std::string& key, const std::string& value) { values_[key] = value; }

    // Keys under "prefix." with the prefix stripped, in sorted order.
    std::vector<std::pair<std::string, std::string>> section(const std::string& prefix) const {
        std::vector<std::pair<std::string, std::string>> out;
        std::string p = prefix + ".";
        for (const auto& [k, v] : values_)
            if (k.size() > p.size() && k.compare(0, p.size(), p) == 0)
                out.emplace_back(k.substr(p.size()), v);
        return out;
    }

    const std::map<std::string, std::string>& values() const { return values_; }

    // Canonical one-line-per-key rendering, for manifests.
    std::string canonical_text() const {
        std::ostringstream os;
        for (const auto& [k, v] : values_) os << k << "=" << v << "\n";
        return os.str();
    }

private:
    std::map<std::string, std::string> values_;
};

}  // namespace corex
