#pragma once
#include <optional>
#include <string>
#include <vector>

namespace dq::csv {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows; // rectangular, header-sized
};

// RFC-4180-style reader: quoted fields, embedded delimiters/quotes/newlines,
// LF or CRLF line endings, UTF-8 BOM stripped. Ragged rows are an error.
Table read_file(const std::string& path, char delimiter = ',');
Table parse(const std::string& text, char delimiter = ',');

void write_file(const std::string& path, const Table& table,
                char delimiter = ',');
std::string format_field(const std::string& value, char delimiter = ',');

// Shortest decimal form that round-trips exactly (std::to_chars).
std::string format_double(double v);

// Strict locale-independent parse; accepts optional leading '+', requires the
// whole (whitespace-trimmed) field to be consumed and the value to be finite.
std::optional<double> parse_double(const std::string& field);

} // namespace dq::csv
