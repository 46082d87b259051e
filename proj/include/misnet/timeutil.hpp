#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace misnet {

/// Seconds since the Unix epoch, UTC.
using Timestamp = std::int64_t;

/// Accepts integer epoch seconds or ISO-8601 date-times:
/// `YYYY-MM-DD`, `YYYY-MM-DDThh:mm[:ss[.fff]]` with an optional `Z` or
/// `±hh[:]mm` offset (a space may replace the `T`). Fractional seconds are
/// truncated. Returns nullopt on anything else.
std::optional<Timestamp> parse_timestamp(std::string_view text);

/// `YYYY-MM-DDThh:mm:ssZ`.
std::string format_timestamp(Timestamp t);

/// First second of the calendar month following the one containing t.
Timestamp next_month_start(Timestamp t);

}  // namespace misnet
