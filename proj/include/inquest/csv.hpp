#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace inquest::csv {

/// One parsed table. `rows` excludes the header; `line_numbers[i]` is the 1-based
/// physical line of `rows[i]` in the source.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers;
    std::string source;

    /// Index of `name` in the header, or throws ParseError naming the file.
    std::size_t column(std::string_view name) const;
};

/// RFC 4180-style reader: comma separated, optional double quotes, "" escapes a quote.
/// A header row is mandatory. Blank lines are skipped.
Table parse(std::string_view text, std::string source_name);
Table read_file(const std::filesystem::path& path);

std::string escape(std::string_view field);
std::string join_row(const std::vector<std::string>& fields);

/// Shortest text that parses back to exactly `value`.
std::string format_number(double value);

double parse_real(const Table& table, std::size_t row, std::size_t col);
long long parse_count(const Table& table, std::size_t row, std::size_t col);
std::optional<double> parse_optional_real(const Table& table, std::size_t row, std::size_t col);

}  // namespace inquest::csv
