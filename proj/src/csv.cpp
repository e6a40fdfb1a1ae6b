#include "dq/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include "dq/error.hpp"

namespace dq::csv {

namespace {

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' ||
           c == '\f';
}

} // namespace

Table parse(const std::string& text, char delimiter) {
    Table table;
    std::vector<std::string> row;
    std::string field;
    bool in_quotes = false;
    bool row_started = false;

    auto end_field = [&] {
        row.push_back(std::move(field));
        field.clear();
    };
    auto end_row = [&] {
        end_field();
        if (table.header.empty()) {
            table.header = std::move(row);
        } else {
            if (row.size() != table.header.size())
                throw input_error(
                    "csv row " + std::to_string(table.rows.size() + 2) +
                    " has " + std::to_string(row.size()) + " fields, header has " +
                    std::to_string(table.header.size()));
            table.rows.push_back(std::move(row));
        }
        row.clear();
        row_started = false;
    };

    std::size_t i = 0;
    // strip a UTF-8 BOM
    if (text.size() >= 3 && text[0] == '\xef' && text[1] == '\xbb' &&
        text[2] == '\xbf')
        i = 3;

    for (; i < text.size(); ++i) {
        char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        if (c == '"' && field.empty()) {
            in_quotes = true;
            row_started = true;
        } else if (c == delimiter) {
            end_field();
            row_started = true;
        } else if (c == '\n') {
            if (!field.empty() && field.back() == '\r') field.pop_back();
            if (row_started || !field.empty() || !row.empty()) end_row();
            // blank lines are skipped
        } else {
            field.push_back(c);
            row_started = true;
        }
    }
    if (in_quotes) throw input_error("csv ends inside a quoted field");
    if (row_started || !field.empty() || !row.empty()) end_row();

    if (table.header.empty())
        throw input_error("csv has no header row");
    return table;
}

Table read_file(const std::string& path, char delimiter) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw input_error("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), delimiter);
}

std::string format_field(const std::string& value, char delimiter) {
    bool needs_quotes = value.find(delimiter) != std::string::npos ||
                        value.find('"') != std::string::npos ||
                        value.find('\n') != std::string::npos ||
                        value.find('\r') != std::string::npos;
    if (!needs_quotes) return value;
    std::string out = "\"";
    for (char c : value) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

void write_file(const std::string& path, const Table& table, char delimiter) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw input_error("cannot write file: " + path);
    auto write_row = [&](const std::vector<std::string>& row) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << delimiter;
            out << format_field(row[i], delimiter);
        }
        out << '\n';
    };
    write_row(table.header);
    for (const auto& row : table.rows) write_row(row);
    if (!out) throw input_error("write failed: " + path);
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::optional<double> parse_double(const std::string& field) {
    std::size_t begin = 0, end = field.size();
    while (begin < end && is_space(field[begin])) ++begin;
    while (end > begin && is_space(field[end - 1])) --end;
    if (begin == end) return std::nullopt;
    if (field[begin] == '+') ++begin; // from_chars rejects a leading '+'
    if (begin == end) return std::nullopt;
    double value = 0.0;
    auto res = std::from_chars(field.data() + begin, field.data() + end, value);
    if (res.ec != std::errc{} || res.ptr != field.data() + end)
        return std::nullopt;
    if (!std::isfinite(value)) return std::nullopt;
    return value;
}

} // namespace dq::csv
