#include "qah/time.hpp"

#include <stdexcept>

#include "doctest.h"

using namespace qah;

// Epoch-second expectations were frozen from an independent calendar
// implementation (Python's datetime, UTC).

TEST_CASE("timestamp_from_civil matches independent epoch values") {
    CHECK(timestamp_from_civil(1970, 1, 1, 0, 0, 0).seconds == 0);
    CHECK(timestamp_from_civil(2014, 4, 1, 10, 0, 0).seconds == 1396346400);
    CHECK(timestamp_from_civil(2014, 4, 2, 0, 0, 0).seconds == 1396396800);
    CHECK(timestamp_from_civil(2015, 1, 15, 8, 30, 0).seconds == 1421310600);
    CHECK(timestamp_from_civil(2016, 2, 1, 0, 0, 0).seconds == 1454284800);
    CHECK(timestamp_from_civil(2000, 2, 29, 23, 59, 59).seconds == 951868799);
    CHECK(timestamp_from_civil(2012, 1, 1, 0, 0, 0).seconds == 1325376000);
    CHECK(timestamp_from_civil(1969, 12, 31, 23, 59, 59).seconds == -1);
}

TEST_CASE("parse_timestamp accepts dump and RFC 3339 forms") {
    auto at = [](std::string_view text) {
        auto ts = parse_timestamp(text);
        REQUIRE(ts.has_value());
        return ts->seconds;
    };
    CHECK(at("2014-04-01T10:00:00") == 1396346400);
    CHECK(at("2014-04-01T10:00:00.000") == 1396346400);
    CHECK(at("2014-04-01T10:00:00.999") == 1396346400);  // fraction truncated
    CHECK(at("2014-04-01T10:00:00Z") == 1396346400);
    CHECK(at("2014-04-01t10:00:00z") == 1396346400);
    CHECK(at("2014-04-01 10:00:00") == 1396346400);
    CHECK(at("2016-06-10T12:34:56Z") == 1465562096);
    // Offsets shift back to UTC.
    CHECK(at("2015-06-01T12:00:00+02:00") == 1433152800);
    CHECK(at("2015-06-01T08:00:00-02:00") == 1433152800);
    // A leap second folds onto the last representable second.
    CHECK(at("1998-12-31T23:59:60Z") == 915148799);
}

TEST_CASE("parse_timestamp rejects malformed or impossible datetimes") {
    CHECK_FALSE(parse_timestamp("").has_value());
    CHECK_FALSE(parse_timestamp("not-a-date").has_value());
    CHECK_FALSE(parse_timestamp("2015-02-29T00:00:00").has_value());  // not a leap year
    CHECK_FALSE(parse_timestamp("2015-13-01T00:00:00").has_value());
    CHECK_FALSE(parse_timestamp("2015-00-01T00:00:00").has_value());
    CHECK_FALSE(parse_timestamp("2015-04-31T00:00:00").has_value());
    CHECK_FALSE(parse_timestamp("2015-04-01T24:00:00").has_value());
    CHECK_FALSE(parse_timestamp("2015-04-01T10:61:00").has_value());
    CHECK_FALSE(parse_timestamp("2015-04-01T10:00:00+24:00").has_value());
    CHECK_FALSE(parse_timestamp("2015-04-01T10:00:00+02:60").has_value());
    CHECK_FALSE(parse_timestamp("2015-04-01T10:00:00.").has_value());  // empty fraction
    CHECK_FALSE(parse_timestamp("2015-04-01T10:00:00Zx").has_value());
    CHECK_FALSE(parse_timestamp("2015-04-01").has_value());
}

TEST_CASE("format_timestamp emits RFC 3339 Z form and round-trips") {
    CHECK(format_timestamp(Timestamp{1396346400}) == "2014-04-01T10:00:00Z");
    CHECK(format_timestamp(Timestamp{0}) == "1970-01-01T00:00:00Z");
    const std::int64_t samples[] = {0, 1, -1, 951868799, 1465562096, 1325376000};
    for (std::int64_t s : samples) {
        auto parsed = parse_timestamp(format_timestamp(Timestamp{s}));
        REQUIRE(parsed.has_value());
        CHECK(parsed->seconds == s);
    }
}

TEST_CASE("month_of buckets by UTC calendar month") {
    CHECK(month_of(Timestamp{1396346400}) == YearMonth{2014, 4});
    CHECK(month_of(Timestamp{0}) == YearMonth{1970, 1});
    CHECK(month_of(Timestamp{-1}) == YearMonth{1969, 12});
    CHECK(month_of(Timestamp{951868799}) == YearMonth{2000, 2});
}

TEST_CASE("month arithmetic") {
    CHECK(month_span({2014, 4}, {2015, 2}) == 11);
    CHECK(month_span({2016, 6}, {2016, 6}) == 1);
    CHECK(month_span({2016, 6}, {2016, 5}) == 0);
    CHECK(month_span({2012, 1}, {2016, 12}) == 60);

    CHECK(add_months({2014, 11}, 3) == YearMonth{2015, 2});
    CHECK(add_months({2014, 1}, -1) == YearMonth{2013, 12});
    CHECK(add_months({2014, 6}, 0) == YearMonth{2014, 6});
    CHECK(add_months({2012, 1}, 59) == YearMonth{2016, 12});

    CHECK(to_string(YearMonth{2017, 2}) == "2017-02");
    CHECK(to_string(YearMonth{2017, 11}) == "2017-11");
}

TEST_CASE("parse_year_month") {
    REQUIRE(parse_year_month("2017-02").has_value());
    CHECK(*parse_year_month("2017-02") == YearMonth{2017, 2});
    CHECK(*parse_year_month("1999-12") == YearMonth{1999, 12});
    CHECK_FALSE(parse_year_month("2017-13").has_value());
    CHECK_FALSE(parse_year_month("2017-00").has_value());
    CHECK_FALSE(parse_year_month("2017").has_value());
    CHECK_FALSE(parse_year_month("2017-2").has_value());
    CHECK_FALSE(parse_year_month("abcd-ef").has_value());
    CHECK_FALSE(parse_year_month("").has_value());
}
