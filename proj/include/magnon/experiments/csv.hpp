#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace magnon::experiments {

/// Shortest round-trip decimal form; identical for identical doubles.
std::string format_number(double value);

/// Minimal CSV writer with fixed header and deterministic number formatting.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, std::initializer_list<std::string_view> header);

    CsvWriter& field(double value);
    CsvWriter& field(long long value);
    CsvWriter& field(unsigned long long value);
    CsvWriter& field(int value) { return field(static_cast<long long>(value)); }
    CsvWriter& field(std::string_view value);
    void end_row();

    /// Flushes and throws with the offending path on any I/O failure.
    void close();

private:
    void separator();

    std::filesystem::path path_;
    std::ofstream out_;
    std::size_t columns_;
    std::size_t column_ = 0;
};

/// Parsed rows of a CSV produced by CsvWriter (no quoting).
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(const std::filesystem::path& path);

/// Creates `dir` (and parents); throws with the path on failure.
void ensure_directory(const std::filesystem::path& dir);

}  // namespace magnon::experiments
