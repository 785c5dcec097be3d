#pragma once
// Delimited-text reading and writing. Line-oriented, UTF-8 passthrough,
// header row required. Fields may be double-quoted; embedded newlines are
// not supported.

#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "corex/common.hpp"

namespace corex {

inline std::vector<std::string> split_csv_line(std::string_view line, char sep) {
    std::vector<std::string> out;
    std::string field;
    bool in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"' && field.empty()) {
            in_quotes = true;
        } else if (c == sep) {
            out.push_back(std::move(field));
            field.clear();
        } else if (c == '\r' && i + 1 == line.size()) {
            // drop trailing CR from CRLF input
        } else {
            field.push_back(c);
        }
    }
    out.push_back(std::move(field));
    return out;
}

inline std::string csv_escape(std::string_view s, char sep) {
    bool needs = false;
    for (char c : s)
        if (c == sep || c == '"' || c == '\n' || c == '\r') { needs = true; break; }
    if (!needs) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += '"';
    return out;
}

// Streaming reader over a header-ed delimited file.
class CsvReader {
public:
    CsvReader(std::istream& in, char sep = ',') : in_(in), sep_(sep) {
        std::string header;
        if (!std::getline(in_, header))
            throw Error("empty input: missing header row");
        columns_ = split_csv_line(header, sep_);
        for (std::size_t i = 0; i < columns_.size(); ++i)
            index_[columns_[i]] = i;
        line_no_ = 1;
    }

    const std::vector<std::string>& columns() const { return columns_; }

    bool has_column(const std::string& name) const { return index_.count(name) > 0; }

    // Index of a mandatory column; throws a configuration error if missing.
    std::size_t column(const std::string& name) const {
        auto it = index_.find(name);
        if (it == index_.end())
            throw Error("missing mandatory column '" + name + "'");
        return it->second;
    }

    // Reads the next row. Returns false at end of input. Blank lines are
    // skipped. `line_no()` reports the 1-based physical line of the row.
    bool next(std::vector<std::string>& row) {
        std::string line;
        while (std::getline(in_, line)) {
            ++line_no_;
            std::string_view sv(line);
            if (trim(sv).empty()) continue;
            row = split_csv_line(line, sep_);
            return true;
        }
        return false;
    }

    i64 line_no() const { return line_no_; }

private:
    std::istream& in_;
    char sep_;
    std::vector<std::string> columns_;
    std::map<std::string, std::size_t> index_;
    i64 line_no_ = 0;
};

// Row-at-a-time writer. Callers pass already-formatted fields; quoting is
// applied only where the delimiter demands it.
class CsvWriter {
public:
    CsvWriter(std::ostream& out, std::vector<std::string> columns, char sep = ',')
        : out_(out), sep_(sep), n_cols_(columns.size()) {
        write_row(columns);
    }

    void write_row(const std::vector<std::string>& fields) {
        if (fields.size() != n_cols_)
            throw Error("csv row width mismatch");
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out_.put(sep_);
            out_ << csv_escape(fields[i], sep_);
        }
        out_.put('\n');
    }

private:
    std::ostream& out_;
    char sep_;
    std::size_t n_cols_;
};

inline std::ifstream open_input(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error("cannot open input file: " + path);
    return f;
}

inline std::ofstream open_output(const std::string& path) {
    std::ofstream f(path, std::ios::binary);  // keep '\n' line endings everywhere
    if (!f) throw Error("cannot open output file: " + path);
    return f;
}

}  // namespace corex
