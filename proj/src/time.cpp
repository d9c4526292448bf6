#include "qah/time.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>

namespace qah {
namespace {

constexpr std::int64_t kSecondsPerDay = 86400;

// Howard Hinnant's civil-from-days algorithms; exact over the proleptic
// Gregorian calendar for the full int range used here.
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

struct CivilDate {
    std::int64_t year;
    unsigned month;
    unsigned day;
};

CivilDate civil_from_days(std::int64_t z) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    return {y + (m <= 2), m, d};
}

unsigned last_day_of_month(int year, unsigned month) {
    static constexpr unsigned kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (month != 2) return kDays[month - 1];
    const bool leap = year % 4 == 0 && (year % 100 != 0 || year % 400 == 0);
    return leap ? 29 : 28;
}

/// Parses exactly `digits` ASCII digits at text[pos], advancing pos.
bool read_digits(std::string_view text, std::size_t& pos, int digits, int& out) {
    if (pos + static_cast<std::size_t>(digits) > text.size()) return false;
    int value = 0;
    for (int i = 0; i < digits; ++i) {
        const char c = text[pos + static_cast<std::size_t>(i)];
        if (c < '0' || c > '9') return false;
        value = value * 10 + (c - '0');
    }
    pos += static_cast<std::size_t>(digits);
    out = value;
    return true;
}

bool consume(std::string_view text, std::size_t& pos, char expected) {
    if (pos >= text.size() || text[pos] != expected) return false;
    ++pos;
    return true;
}

}  // namespace

int month_span(YearMonth first, YearMonth last) {
    return (last.year - first.year) * 12 + (last.month - first.month) + 1;
}

YearMonth add_months(YearMonth ym, int n) {
    int linear = ym.year * 12 + (ym.month - 1) + n;
    int year = linear / 12;
    int month = linear % 12;
    if (month < 0) {
        month += 12;
        --year;
    }
    return {year, month + 1};
}

std::string to_string(YearMonth ym) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d", ym.year, ym.month);
    return buf;
}

std::optional<YearMonth> parse_year_month(std::string_view text) {
    std::size_t pos = 0;
    int year = 0;
    int month = 0;
    if (!read_digits(text, pos, 4, year)) return std::nullopt;
    if (!consume(text, pos, '-')) return std::nullopt;
    if (!read_digits(text, pos, 2, month)) return std::nullopt;
    if (pos != text.size()) return std::nullopt;
    if (month < 1 || month > 12) return std::nullopt;
    return YearMonth{year, month};
}

YearMonth month_of(Timestamp ts) {
    std::int64_t day = ts.seconds / kSecondsPerDay;
    if (ts.seconds % kSecondsPerDay < 0) --day;
    const CivilDate civil = civil_from_days(day);
    return {static_cast<int>(civil.year), static_cast<int>(civil.month)};
}

Timestamp timestamp_from_civil(int year, int month, int day, int hour, int minute, int second) {
    const std::int64_t days = days_from_civil(year, static_cast<unsigned>(month), static_cast<unsigned>(day));
    return Timestamp{days * kSecondsPerDay + hour * 3600 + minute * 60 + second};
}

std::optional<Timestamp> parse_timestamp(std::string_view text) {
    std::size_t pos = 0;
    int year = 0, month = 0, day = 0, hour = 0, minute = 0, second = 0;
    if (!read_digits(text, pos, 4, year)) return std::nullopt;
    if (!consume(text, pos, '-')) return std::nullopt;
    if (!read_digits(text, pos, 2, month)) return std::nullopt;
    if (!consume(text, pos, '-')) return std::nullopt;
    if (!read_digits(text, pos, 2, day)) return std::nullopt;
    if (pos >= text.size() || (text[pos] != 'T' && text[pos] != 't' && text[pos] != ' ')) return std::nullopt;
    ++pos;
    if (!read_digits(text, pos, 2, hour)) return std::nullopt;
    if (!consume(text, pos, ':')) return std::nullopt;
    if (!read_digits(text, pos, 2, minute)) return std::nullopt;
    if (!consume(text, pos, ':')) return std::nullopt;
    if (!read_digits(text, pos, 2, second)) return std::nullopt;

    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        std::size_t digits = 0;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
            ++pos;
            ++digits;
        }
        if (digits == 0) return std::nullopt;
    }

    int offset_seconds = 0;
    if (pos < text.size()) {
        const char c = text[pos];
        if (c == 'Z' || c == 'z') {
            ++pos;
        } else if (c == '+' || c == '-') {
            ++pos;
            int oh = 0, om = 0;
            if (!read_digits(text, pos, 2, oh)) return std::nullopt;
            if (!consume(text, pos, ':')) return std::nullopt;
            if (!read_digits(text, pos, 2, om)) return std::nullopt;
            if (oh > 23 || om > 59) return std::nullopt;
            offset_seconds = (oh * 3600 + om * 60) * (c == '+' ? 1 : -1);
        } else {
            return std::nullopt;
        }
    }
    if (pos != text.size()) return std::nullopt;

    if (month < 1 || month > 12) return std::nullopt;
    if (day < 1 || day > static_cast<int>(last_day_of_month(year, static_cast<unsigned>(month)))) return std::nullopt;
    if (hour > 23 || minute > 59 || second > 60) return std::nullopt;
    if (second == 60) second = 59;  // fold leap seconds

    Timestamp ts = timestamp_from_civil(year, month, day, hour, minute, second);
    ts.seconds -= offset_seconds;
    return ts;
}

std::string format_timestamp(Timestamp ts) {
    std::int64_t day = ts.seconds / kSecondsPerDay;
    std::int64_t rem = ts.seconds % kSecondsPerDay;
    if (rem < 0) {
        rem += kSecondsPerDay;
        --day;
    }
    const CivilDate civil = civil_from_days(day);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04lld-%02u-%02uT%02lld:%02lld:%02lldZ",
                  static_cast<long long>(civil.year), civil.month, civil.day,
                  static_cast<long long>(rem / 3600), static_cast<long long>(rem / 60 % 60),
                  static_cast<long long>(rem % 60));
    return buf;
}

}  // namespace qah
