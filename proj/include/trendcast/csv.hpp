#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace trendcast::csv {

struct Record {
    std::size_t line = 0;  // 1-based line number in the source file
    std::vector<std::string> fields;
};

struct Table {
    std::string source;
    std::vector<std::string> header;
    std::vector<Record> records;
};

/// Splits one CSV line. Double-quoted fields may contain commas and "" escapes.
std::vector<std::string> split_line(std::string_view line);

Table parse(std::istream& in, const std::string& source_name);
/// Throws IoError if the file cannot be opened.
Table read_file(const std::string& path);

std::string quote(std::string_view field);
std::string join(const std::vector<std::string>& fields);

/// Shortest decimal form that round-trips to the same double.
std::string format_double(double value);

/// Strict parsers; the whole field must be consumed.
std::optional<long long> parse_int(std::string_view text);
std::optional<double> parse_double(std::string_view text);

}  // namespace trendcast::csv
