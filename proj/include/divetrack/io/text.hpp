#pragma once

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "divetrack/error.hpp"

namespace divetrack::io {

/// Shortest decimal text that round-trips to the same double.
inline std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline std::string format_number(long v) { return std::to_string(v); }

inline double parse_double(std::string_view s, std::size_t line) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw InvalidInput("line " + std::to_string(line) + ": not a number: '" + std::string(s) + "'");
    }
    return v;
}

inline long parse_long(std::string_view s, std::size_t line) {
    long v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw InvalidInput("line " + std::to_string(line) + ": not an integer: '" + std::string(s) + "'");
    }
    return v;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct CsvTable {
    std::vector<std::vector<std::string>> rows;  // excluding the header
    std::vector<std::size_t> line_numbers;       // 1-based source line of each row
};

/// Parse simple comma-separated text whose first line must equal `header` exactly.
inline CsvTable parse_csv(std::string_view text, std::string_view header) {
    CsvTable table;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    bool seen_header = false;
    const std::size_t columns = static_cast<std::size_t>(std::count(header.begin(), header.end(), ',')) + 1;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        if (!seen_header) {
            if (line != header) {
                throw InvalidInput("expected CSV header '" + std::string(header) + "', got '" + std::string(line) + "'");
            }
            seen_header = true;
            continue;
        }
        std::vector<std::string> cells;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            cells.emplace_back(line.substr(start, comma == std::string_view::npos ? comma : comma - start));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (cells.size() != columns) {
            throw InvalidInput("line " + std::to_string(line_no) + ": expected " + std::to_string(columns) +
                               " columns, got " + std::to_string(cells.size()));
        }
        table.rows.push_back(std::move(cells));
        table.line_numbers.push_back(line_no);
    }
    if (!seen_header) throw InvalidInput("missing CSV header '" + std::string(header) + "'");
    return table;
}

}  // namespace divetrack::io
