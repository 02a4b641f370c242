#include "magnon/experiments/csv.hpp"

#include <array>
#include <charconv>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace magnon::experiments {

std::string format_number(double value) {
    if (value == 0.0) return "0";  // folds -0
    std::array<char, 64> buffer{};
    const auto [end, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
    if (ec != std::errc()) throw std::runtime_error("format_number: conversion failed");
    return std::string(buffer.data(), end);
}

CsvWriter::CsvWriter(const std::filesystem::path& path,
                     std::initializer_list<std::string_view> header)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc), columns_(header.size()) {
    if (!out_) throw std::runtime_error("cannot open " + path.string() + " for writing");
    for (std::string_view name : header) field(name);
    end_row();
}

void CsvWriter::separator() {
    if (column_ > 0) out_ << ',';
    ++column_;
}

CsvWriter& CsvWriter::field(double value) {
    separator();
    out_ << format_number(value);
    return *this;
}

CsvWriter& CsvWriter::field(long long value) {
    separator();
    out_ << value;
    return *this;
}

CsvWriter& CsvWriter::field(unsigned long long value) {
    separator();
    out_ << value;
    return *this;
}

CsvWriter& CsvWriter::field(std::string_view value) {
    separator();
    out_ << value;
    return *this;
}

void CsvWriter::end_row() {
    if (column_ != columns_) {
        throw std::logic_error(path_.string() + ": row has " + std::to_string(column_) +
                               " fields, header has " + std::to_string(columns_));
    }
    out_ << '\n';
    column_ = 0;
}

void CsvWriter::close() {
    out_.flush();
    if (!out_) throw std::runtime_error("write failed for " + path_.string());
    out_.close();
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    auto split = [](const std::string& line) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        return cells;
    };
    CsvTable table;
    std::string line;
    if (std::getline(in, line)) table.header = split(line);
    while (std::getline(in, line)) {
        if (!line.empty()) table.rows.push_back(split(line));
    }
    return table;
}

void ensure_directory(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create directory " + dir.string() + ": " + ec.message());
}

}  // namespace magnon::experiments
