#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace qah {

/// Calendar month (proleptic Gregorian, UTC).
struct YearMonth {
    int year = 0;
    int month = 1;  // 1..12

    friend auto operator<=>(const YearMonth&, const YearMonth&) = default;
};

/// Calendar months from `first` to `last` inclusive. 1 when equal,
/// non-positive when last precedes first.
int month_span(YearMonth first, YearMonth last);

YearMonth add_months(YearMonth ym, int n);

std::string to_string(YearMonth ym);  // "2017-02"

std::optional<YearMonth> parse_year_month(std::string_view text);

/// UTC instant at second resolution.
struct Timestamp {
    std::int64_t seconds = 0;  // since 1970-01-01T00:00:00Z

    friend auto operator<=>(const Timestamp&, const Timestamp&) = default;
};

YearMonth month_of(Timestamp ts);

Timestamp timestamp_from_civil(int year, int month, int day, int hour, int minute, int second);

/// Parses "YYYY-MM-DDThh:mm:ss" with optional fractional seconds and optional
/// zone ("Z" or "+hh:mm"/"-hh:mm"). A missing zone is read as UTC, which
/// covers both RFC 3339 text and Stack Exchange dump timestamps
/// ("YYYY-MM-DDThh:mm:ss.fff"). Fractional seconds are truncated; invalid
/// calendar dates are rejected.
std::optional<Timestamp> parse_timestamp(std::string_view text);

/// RFC 3339 with Z suffix: "2014-04-01T10:00:00Z".
std::string format_timestamp(Timestamp ts);

}  // namespace qah
