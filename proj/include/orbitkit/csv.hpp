#ifndef ORBITKIT_CSV_HPP
#define ORBITKIT_CSV_HPP

// Deterministic CSV emission: RFC-4180 quoting, fixed %.17g float rendering,
// and a schema_version column so downstream readers can detect layout changes.
// Nothing time- or locale-dependent may enter a table; reruns with the same
// inputs must produce byte-identical files.

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "orbitkit/core.hpp"

namespace orbitkit {

inline constexpr const char* csv_schema_version = "1";

inline std::string csv_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string csv_number(long long v) { return std::to_string(v); }

inline std::string csv_field(const std::string& s) {
    bool needs_quotes = s.find_first_of(",\"\r\n") != std::string::npos;
    if (!needs_quotes) return s;
    std::string out;
    out.reserve(s.size() + 2);
    out.push_back('"');
    for (char c : s) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

    void add_row(std::vector<std::string> fields) {
        require(fields.size() == header_.size(), "csv: row width differs from header");
        rows_.push_back(std::move(fields));
    }

    const std::vector<std::string>& header() const { return header_; }
    const std::vector<std::vector<std::string>>& rows() const { return rows_; }

    std::string to_string() const {
        std::string out;
        append_line(out, header_);
        for (const auto& r : rows_) append_line(out, r);
        return out;
    }

    void write_file(const std::string& path) const {
        std::ofstream f(path, std::ios::binary);
        if (!f) throw resource_error("csv: cannot open " + path + " for writing");
        std::string body = to_string();
        f.write(body.data(), static_cast<std::streamsize>(body.size()));
        if (!f) throw resource_error("csv: write to " + path + " failed");
    }

private:
    static void append_line(std::string& out, const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out.push_back(',');
            out += csv_field(fields[i]);
        }
        out.push_back('\n');
    }

    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

}  // namespace orbitkit

#endif
