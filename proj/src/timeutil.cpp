#include "misnet/timeutil.hpp"

#include <cctype>
#include <charconv>
#include <chrono>
#include <cstdio>

namespace misnet {

namespace {

using namespace std::chrono;

bool read_int(std::string_view s, std::size_t& pos, std::size_t digits, int& out) {
    if (pos + digits > s.size()) return false;
    int value = 0;
    for (std::size_t i = 0; i < digits; ++i) {
        const char c = s[pos + i];
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
        value = value * 10 + (c - '0');
    }
    pos += digits;
    out = value;
    return true;
}

bool expect(std::string_view s, std::size_t& pos, char c) {
    if (pos < s.size() && s[pos] == c) {
        ++pos;
        return true;
    }
    return false;
}

}  // namespace

std::optional<Timestamp> parse_timestamp(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    if (text.empty()) return std::nullopt;

    // Pure integer: epoch seconds.
    {
        Timestamp value = 0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec == std::errc() && ptr == text.data() + text.size()) return value;
    }

    std::size_t pos = 0;
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, sec = 0;
    if (!read_int(text, pos, 4, y) || !expect(text, pos, '-') || !read_int(text, pos, 2, mo) ||
        !expect(text, pos, '-') || !read_int(text, pos, 2, d)) {
        return std::nullopt;
    }
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) return std::nullopt;

    int offset_seconds = 0;
    if (pos < text.size()) {
        if (text[pos] != 'T' && text[pos] != 't' && text[pos] != ' ') return std::nullopt;
        ++pos;
        if (!read_int(text, pos, 2, h) || !expect(text, pos, ':') || !read_int(text, pos, 2, mi)) {
            return std::nullopt;
        }
        if (expect(text, pos, ':')) {
            if (!read_int(text, pos, 2, sec)) return std::nullopt;
            if (expect(text, pos, '.') || expect(text, pos, ',')) {
                std::size_t start = pos;
                while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
                if (pos == start) return std::nullopt;
            }
        }
        if (h > 23 || mi > 59 || sec > 60) return std::nullopt;
        if (pos < text.size()) {
            const char c = text[pos];
            if (c == 'Z' || c == 'z') {
                ++pos;
            } else if (c == '+' || c == '-') {
                ++pos;
                int oh = 0, om = 0;
                if (!read_int(text, pos, 2, oh)) return std::nullopt;
                expect(text, pos, ':');
                if (pos < text.size() && !read_int(text, pos, 2, om)) return std::nullopt;
                if (oh > 23 || om > 59) return std::nullopt;
                offset_seconds = (oh * 3600 + om * 60) * (c == '+' ? 1 : -1);
            }
        }
        if (pos != text.size()) return std::nullopt;
    }

    const auto day_start = sys_days{ymd}.time_since_epoch();
    return duration_cast<seconds>(day_start).count() + h * 3600 + mi * 60 + sec - offset_seconds;
}

std::string format_timestamp(Timestamp t) {
    const sys_seconds tp{seconds{t}};
    const auto dp = floor<days>(tp);
    const year_month_day ymd{dp};
    const hh_mm_ss hms{tp - dp};
    char buf[64];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02lld:%02lld:%02lldZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<long long>(hms.hours().count()), static_cast<long long>(hms.minutes().count()),
                  static_cast<long long>(hms.seconds().count()));
    return buf;
}

Timestamp next_month_start(Timestamp t) {
    const sys_seconds tp{seconds{t}};
    const year_month_day ymd{floor<days>(tp)};
    const year_month_day first{ymd.year() / ymd.month() / 1};
    const sys_days next{first + months{1}};
    return duration_cast<seconds>(next.time_since_epoch()).count();
}

}  // namespace misnet
