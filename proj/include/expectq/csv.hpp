#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace expectq {

/// In-memory CSV with a header row. Quoted fields follow RFC 4180.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::optional<std::size_t> column(std::string_view name) const;
    std::size_t require_column(std::string_view name) const;
};

CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::filesystem::path& path);

void write_csv_row(std::ostream& out, std::span<const std::string> fields);

/// Shortest round-trip representation; NaN is written as an empty cell.
std::string format_number(double value);

/// Empty or "NA" cells parse to NaN.
double parse_number(std::string_view cell);

}  // namespace expectq
