#include "misnet/csv.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <sstream>

namespace misnet::csv {

namespace {

// Parses one logical record starting from `first`, pulling further physical
// lines from `in` while a quoted field is open.
Record parse_record(std::string first, std::istream& in, std::size_t& line) {
    Record rec;
    rec.line = line;
    rec.raw = first;
    std::string field;
    bool in_quotes = false;
    bool field_was_quoted = false;
    std::string text = std::move(first);
    std::size_t i = 0;
    while (true) {
        if (i >= text.size()) {
            if (in_quotes) {
                std::string more;
                if (!std::getline(in, more)) {
                    rec.malformed = true;
                    break;
                }
                ++line;
                if (!more.empty() && more.back() == '\r') more.pop_back();
                field.push_back('\n');
                rec.raw += '\n';
                rec.raw += more;
                text = std::move(more);
                i = 0;
                continue;
            }
            break;
        }
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
                field.push_back(c);
            }
        } else if (c == ',') {
            rec.fields.push_back(std::move(field));
            field.clear();
            field_was_quoted = false;
        } else if (c == '"') {
            if (field.empty() && !field_was_quoted) {
                in_quotes = true;
                field_was_quoted = true;
            } else {
                rec.malformed = true;
                field.push_back(c);
            }
        } else {
            if (field_was_quoted) rec.malformed = true;
            field.push_back(c);
        }
        ++i;
    }
    rec.fields.push_back(std::move(field));
    return rec;
}

}  // namespace

std::optional<Record> Reader::next() {
    std::string text;
    while (std::getline(in_, text)) {
        ++line_;
        if (!text.empty() && text.back() == '\r') text.pop_back();
        if (text.empty()) continue;
        return parse_record(std::move(text), in_, line_);
    }
    return std::nullopt;
}

std::vector<std::string> split_line(std::string_view line) {
    std::istringstream empty;
    std::size_t n = 1;
    return parse_record(std::string(line), empty, n).fields;
}

std::string escape(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string join(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out.push_back(',');
        out += escape(fields[i]);
    }
    return out;
}

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (value == 0.0) return "0";  // folds -0
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

std::string format_optional(const std::optional<double>& value) {
    return value ? format_double(*value) : std::string();
}

}  // namespace misnet::csv
