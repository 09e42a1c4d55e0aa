#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "epb/errors.hpp"

namespace epb {

// Fixed 17-significant-digit formatting so identical runs emit identical bytes.
inline std::string fmt_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return std::string(buf);
}

class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
        append_row(header);
    }

    void row(const std::vector<std::string>& cells) {
        if (cells.size() != columns_)
            throw DomainError("csv row width mismatch");
        append_row(cells);
    }

    static std::string cell(double x) { return fmt_double(x); }
    static std::string cell(std::int64_t x) { return std::to_string(x); }
    static std::string cell(std::uint64_t x) { return std::to_string(x); }
    static std::string cell(int x) { return std::to_string(x); }
    static std::string cell(bool x) { return x ? "1" : "0"; }
    static std::string cell(const std::string& x) { return x; }

    const std::string& str() const { return buffer_; }

    void write_file(const std::string& path) const {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw Error("cannot open output file: " + path);
        out << buffer_;
    }

private:
    void append_row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) buffer_ += ',';
            buffer_ += cells[i];
        }
        buffer_ += '\n';
    }

    std::size_t columns_;
    std::string buffer_;
};

// Minimal numeric CSV reader (no quoting; used for member-value matrices).
inline std::vector<std::vector<double>> read_numeric_csv(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> row;
        std::size_t pos = 0;
        while (pos <= line.size()) {
            std::size_t next = line.find(',', pos);
            if (next == std::string::npos) next = line.size();
            const std::string tok = line.substr(pos, next - pos);
            try {
                std::size_t used = 0;
                double v = std::stod(tok, &used);
                if (used != tok.size()) throw std::invalid_argument(tok);
                row.push_back(v);
            } catch (const std::exception&) {
                throw DomainError("csv: not a number: '" + tok + "'");
            }
            pos = next + 1;
            if (next == line.size()) break;
        }
        rows.push_back(std::move(row));
    }
    if (!rows.empty()) {
        const std::size_t w = rows.front().size();
        for (const auto& r : rows)
            if (r.size() != w) throw DomainError("csv: ragged rows");
    }
    return rows;
}

} // namespace epb
