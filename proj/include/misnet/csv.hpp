#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace misnet::csv {

struct Record {
    std::size_t line = 0;  // 1-based line where the record starts
    std::vector<std::string> fields;
    std::string raw;
    bool malformed = false;  // unterminated quote or stray quote
};

/// Streaming RFC-4180 reader. Quoted fields may contain commas, doubled
/// quotes and line breaks. CRLF and LF are both accepted.
class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}

    /// Next record, or nullopt at end of input. Blank lines are skipped.
    std::optional<Record> next();

private:
    std::istream& in_;
    std::size_t line_ = 0;
};

std::vector<std::string> split_line(std::string_view line);

/// Quotes a field when it contains a comma, quote or line break.
std::string escape(std::string_view field);

/// Joins already-formatted fields with commas, escaping as needed.
std::string join(const std::vector<std::string>& fields);

/// Shortest round-trip decimal representation.
std::string format_double(double value);

/// format_double, or the empty string for nullopt.
std::string format_optional(const std::optional<double>& value);

}  // namespace misnet::csv
