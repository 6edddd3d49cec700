#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "wiltscan/error.hpp"

namespace wiltscan::csv {

// Minimal CSV support: comma-separated, no quoting or escaping. All files
// this project reads and writes are plain identifiers and numbers.

inline std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    fields.push_back(cur);
    return fields;
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        throw DataError("missing CSV column: " + name);
    }
};

inline Table read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open CSV file: " + path);
    Table t;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto fields = split_row(line);
        if (first) {
            t.header = std::move(fields);
            first = false;
        } else {
            if (fields.size() != t.header.size())
                throw DataError("CSV row has " + std::to_string(fields.size()) +
                                " fields, expected " + std::to_string(t.header.size()) +
                                " in " + path);
            t.rows.push_back(std::move(fields));
        }
    }
    if (first) throw DataError("CSV file has no header: " + path);
    return t;
}

// Shortest round-trippable decimal representation; locale-independent.
inline std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) throw InternalError("number formatting failed");
    return std::string(buf, end);
}

inline double parse_double(const std::string& s, const std::string& context) {
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw DataError("cannot parse number '" + s + "' in " + context);
    return v;
}

inline long parse_int(const std::string& s, const std::string& context) {
    long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw DataError("cannot parse integer '" + s + "' in " + context);
    return v;
}

class Writer {
public:
    explicit Writer(const std::string& path) : out_(path, std::ios::binary) {
        if (!out_) throw IoError("cannot open CSV file for writing: " + path);
    }

    void row(const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out_ << ',';
            out_ << fields[i];
        }
        out_ << '\n';
    }

private:
    std::ofstream out_;
};

} // namespace wiltscan::csv
