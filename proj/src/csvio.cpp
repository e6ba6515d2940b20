#include "igac/csvio.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "igac/errors.hpp"

namespace igac {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
}

void write_csv(const std::string& path, const CsvTable& table) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    for (size_t i = 0; i < table.header.size(); ++i) {
        if (i) out << ',';
        out << table.header[i];
    }
    out << '\n';
    for (const auto& row : table.rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << format_double(row[i]);
        }
        out << '\n';
    }
    if (!out) throw IoError("write failed: " + path);
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);
    CsvTable table;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.push_back("");
        if (lineno == 1) {
            table.header = cells;
            continue;
        }
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& c : cells) {
            try {
                size_t pos = 0;
                double v = std::stod(c, &pos);
                // trailing junk after the number is malformed
                while (pos < c.size() && (c[pos] == ' ' || c[pos] == '\t')) ++pos;
                if (pos != c.size()) throw std::invalid_argument(c);
                row.push_back(v);
            } catch (const std::exception&) {
                throw ParseError("bad numeric cell '" + c + "' in " + path, lineno);
            }
        }
        if (!table.header.empty() && row.size() != table.header.size())
            throw ParseError("row width mismatch in " + path, lineno);
        table.rows.push_back(std::move(row));
    }
    if (table.header.empty())
        throw ParseError("empty csv: " + path, 0);
    return table;
}

void ensure_directory(const std::string& path) {
    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    if (ec) throw IoError("cannot create directory " + path + ": " + ec.message());
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << content;
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace igac
