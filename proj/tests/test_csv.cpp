#include "qah/csv.hpp"

#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "qah/time.hpp"

using namespace qah;

TEST_CASE("basic rows parse with case-insensitive kinds") {
    std::istringstream in(
        "user_id,timestamp,kind\n"
        "u1,2016-02-01T00:00:00Z,question\n"
        "u1,2016-02-01T00:00:00Z,QUESTION\n"
        "u2,2016-03-05T10:30:00Z,Answer\n"
        "u3,2016-03-06T11:00:00Z,comment\n");
    CsvReport report;
    const auto events = parse_event_csv(in, &report);

    REQUIRE(events.size() == 4);
    CHECK(events[0].user_id == "u1");
    CHECK(events[0].timestamp == timestamp_from_civil(2016, 2, 1, 0, 0, 0));
    CHECK(events[0].kind == EventKind::Question);
    CHECK(events[1].kind == EventKind::Question);
    CHECK(events[2].kind == EventKind::Answer);
    CHECK(events[3].kind == EventKind::Comment);
    CHECK(report.rows == 4);
    CHECK(report.events == 4);
    CHECK(report.skipped == 0);
}

TEST_CASE("bad data lines are skipped and tallied with line numbers") {
    std::istringstream in(
        "user_id,timestamp,kind\n"
        "u1,not-a-date,answer\n"
        "u2,2016-03-05T10:30:00Z,answer\n"
        ",2016-03-05T10:30:00Z,answer\n"
        "u4,2016-03-05T10:30:00Z,upvote\n"
        "u5,2016-03-05T10:30:00Z\n");
    CsvReport report;
    const auto events = parse_event_csv(in, &report);

    REQUIRE(events.size() == 1);
    CHECK(events[0].user_id == "u2");
    CHECK(report.rows == 5);
    CHECK(report.events == 1);
    CHECK(report.skipped == 4);
    CHECK(report.events + report.skipped == report.rows);
    // 1-based line numbers, header is line 1.
    CHECK(report.skipped_lines == std::vector<std::size_t>{2, 4, 5, 6});
}

TEST_CASE("header must be exactly user_id,timestamp,kind") {
    std::istringstream wrong("id,when,what\nu1,2016-02-01T00:00:00Z,question\n");
    CHECK_THROWS_AS(parse_event_csv(wrong), CsvError);

    std::istringstream empty("");
    CHECK_THROWS_AS(parse_event_csv(empty), CsvError);

    try {
        std::istringstream bad("id,when,what\n");
        parse_event_csv(bad);
        FAIL("expected CsvError");
    } catch (const CsvError& e) {
        CHECK(e.line() == 1);
    }

    // Padding around header names is tolerated.
    std::istringstream padded(" user_id , timestamp , kind \nu1,2016-02-01T00:00:00Z,question\n");
    CHECK(parse_event_csv(padded).size() == 1);
}

TEST_CASE("quoting, CRLF, and blank lines") {
    std::istringstream in(
        "user_id,timestamp,kind\r\n"
        "\"u,1\",2016-02-01T00:00:00Z,\"question\"\r\n"
        "\r\n"
        "\"say \"\"hi\"\"\",2016-02-02T00:00:00Z,answer\n"
        "\n"
        "u3,\"2016-02-03T00:00:00Z\",comment\n");
    CsvReport report;
    const auto events = parse_event_csv(in, &report);

    REQUIRE(events.size() == 3);
    CHECK(events[0].user_id == "u,1");
    CHECK(events[1].user_id == "say \"hi\"");
    CHECK(events[2].user_id == "u3");
    // Blank lines are not data rows.
    CHECK(report.rows == 3);
    CHECK(report.skipped == 0);
}

TEST_CASE("split_csv_record rejects malformed quoting") {
    std::vector<std::string> fields;
    CHECK_FALSE(split_csv_record("\"unterminated,x,y", fields));
    CHECK_FALSE(split_csv_record("\"closed\"extra,x,y", fields));
    CHECK_FALSE(split_csv_record("pre\"fix,x,y", fields));

    REQUIRE(split_csv_record("a,\"b,c\",d", fields));
    REQUIRE(fields.size() == 3);
    CHECK(fields[0] == "a");
    CHECK(fields[1] == "b,c");
    CHECK(fields[2] == "d");

    REQUIRE(split_csv_record("", fields));
    CHECK(fields.size() == 1);
    CHECK(fields[0].empty());
}

TEST_CASE("write_csv_field quotes only when needed") {
    auto written = [](const std::string& field) {
        std::ostringstream out;
        write_csv_field(out, field);
        return out.str();
    };
    CHECK(written("plain") == "plain");
    CHECK(written("with,comma") == "\"with,comma\"");
    CHECK(written("with\"quote") == "\"with\"\"quote\"");
    CHECK(written("with\nnewline") == "\"with\nnewline\"");
    CHECK(written("") == "");
}

TEST_CASE("round-trip: write then parse yields the identical sequence") {
    std::vector<ActivityEvent> events;
    std::mt19937 rng(7);
    const char* users[] = {"u1", "weird,user", "q\"uote", "u4"};
    for (int i = 0; i < 200; ++i) {
        ActivityEvent ev;
        ev.user_id = users[rng() % 4];
        ev.timestamp = timestamp_from_civil(2014, 1 + static_cast<int>(rng() % 12),
                                            1 + static_cast<int>(rng() % 28),
                                            static_cast<int>(rng() % 24),
                                            static_cast<int>(rng() % 60),
                                            static_cast<int>(rng() % 60));
        ev.kind = static_cast<EventKind>(rng() % 3);
        events.push_back(ev);
    }

    std::ostringstream out;
    write_event_csv(out, events);
    std::istringstream in(out.str());
    CsvReport report;
    const auto parsed = parse_event_csv(in, &report);

    CHECK(report.skipped == 0);
    REQUIRE(parsed.size() == events.size());
    CHECK(parsed == events);
}

TEST_CASE("skipped line records cap at kMaxRecorded") {
    std::ostringstream doc;
    doc << "user_id,timestamp,kind\n";
    for (int i = 0; i < 40; ++i) doc << "u,bad-date,answer\n";
    std::istringstream in(doc.str());
    CsvReport report;
    parse_event_csv(in, &report);
    CHECK(report.skipped == 40);
    CHECK(report.skipped_lines.size() == CsvReport::kMaxRecorded);
}
