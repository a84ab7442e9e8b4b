#include "inquest/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "inquest/error.hpp"

namespace inquest::csv {

namespace {

std::string location(const Table& table, std::size_t row, std::size_t col) {
    std::ostringstream os;
    os << table.source << ": row " << table.line_numbers.at(row) << ", column "
       << (col < table.header.size() ? table.header[col] : std::to_string(col + 1));
    return os.str();
}

const std::string& cell(const Table& table, std::size_t row, std::size_t col) {
    const auto& fields = table.rows.at(row);
    if (col >= fields.size()) {
        throw ParseError(location(table, row, col) + ": missing field");
    }
    return fields[col];
}

}  // namespace

std::size_t Table::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) {
            return i;
        }
    }
    throw ParseError(source + ": header lacks column '" + std::string(name) + "'");
}

Table parse(std::string_view text, std::string source_name) {
    Table table;
    table.source = std::move(source_name);

    if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") {
        text.remove_prefix(3);
    }

    std::vector<std::string> fields;
    std::string field;
    std::size_t line = 1;
    std::size_t record_line = 1;
    bool in_quotes = false;
    bool row_has_content = false;
    bool header_done = false;

    auto finish_row = [&] {
        fields.push_back(std::move(field));
        field.clear();
        if (row_has_content) {
            if (!header_done) {
                table.header = std::move(fields);
                header_done = true;
            } else {
                if (fields.size() != table.header.size()) {
                    std::ostringstream os;
                    os << table.source << ": row " << record_line << ": expected "
                       << table.header.size() << " fields, found " << fields.size();
                    throw ParseError(os.str());
                }
                table.rows.push_back(std::move(fields));
                table.line_numbers.push_back(record_line);
            }
        }
        fields.clear();
        row_has_content = false;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') {
                    ++line;
                }
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
            case '"':
                in_quotes = true;
                row_has_content = true;
                break;
            case ',':
                fields.push_back(std::move(field));
                field.clear();
                row_has_content = true;
                break;
            case '\r':
                break;
            case '\n':
                finish_row();
                ++line;
                record_line = line;
                break;
            default:
                field.push_back(c);
                row_has_content = true;
        }
    }
    if (in_quotes) {
        throw ParseError(table.source + ": row " + std::to_string(record_line) + ": unterminated quoted field");
    }
    if (row_has_content || !field.empty()) {
        finish_row();
    }
    if (!header_done) {
        throw ParseError(table.source + ": missing header row");
    }
    return table;
}

Table read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IngestionError("cannot open file: " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str(), path.filename().string());
}

std::string escape(std::string_view field) {
    if (field.find_first_of(",\"\n\r") == std::string_view::npos) {
        return std::string(field);
    }
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') {
            out.push_back('"');
        }
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string join_row(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) {
            out.push_back(',');
        }
        out += escape(fields[i]);
    }
    return out;
}

std::string format_number(double value) {
    if (value == 0.0) {
        return "0";
    }
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc{}) {
        throw Error("cannot format number");
    }
    return std::string(buf.data(), end);
}

double parse_real(const Table& table, std::size_t row, std::size_t col) {
    const std::string& text = cell(table, row, col);
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (text.empty() || ec != std::errc{} || ptr != last || !std::isfinite(value)) {
        throw ParseError(location(table, row, col) + ": expected a number, found '" + text + "'");
    }
    return value;
}

long long parse_count(const Table& table, std::size_t row, std::size_t col) {
    const std::string& text = cell(table, row, col);
    long long value = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (text.empty() || ec != std::errc{} || ptr != last) {
        throw ParseError(location(table, row, col) + ": expected an integer, found '" + text + "'");
    }
    return value;
}

std::optional<double> parse_optional_real(const Table& table, std::size_t row, std::size_t col) {
    if (cell(table, row, col).empty()) {
        return std::nullopt;
    }
    return parse_real(table, row, col);
}

}  // namespace inquest::csv
