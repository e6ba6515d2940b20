#pragma once

#include <string>
#include <vector>

namespace igac {

// Minimal CSV table. Numeric cells are rendered with "%.17g" so rewritten
// files are byte-identical across runs and platforms with IEEE doubles.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

// Format one double exactly the way write_csv does.
std::string format_double(double v);

// Write table to path. Unix line endings regardless of platform. The parent
// directory must already exist. Throws IoError on failure.
void write_csv(const std::string& path, const CsvTable& table);

// Read a full numeric CSV with a header row. Throws ParseError with a line
// number on malformed input.
CsvTable read_csv(const std::string& path);

// Filesystem helper used by the runner: create directory and parents.
void ensure_directory(const std::string& path);

// Write an arbitrary text file with '\n' endings (fit reports and such).
void write_text(const std::string& path, const std::string& content);

}  // namespace igac
