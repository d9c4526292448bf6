#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qah/ingest.hpp"

namespace qah {

/// Fatal CSV shape error (bad or missing header). `line` is 1-based.
class CsvError : public std::runtime_error {
public:
    CsvError(const std::string& message, std::size_t line);
    std::size_t line() const { return line_; }

private:
    std::size_t line_ = 0;
};

/// Accounting for one CSV pass. events + skipped == rows (data rows only).
struct CsvReport {
    std::uint64_t rows = 0;
    std::uint64_t events = 0;
    std::uint64_t skipped = 0;
    std::vector<std::size_t> skipped_lines;  // 1-based, capped at kMaxRecorded
    static constexpr std::size_t kMaxRecorded = 32;
};

/// Reads the generic event format:
///
///     user_id,timestamp,kind
///     u1,2015-03-07T12:00:00Z,question
///
/// Timestamps are RFC 3339; kind is question|answer|comment, case
/// insensitive. Fields may be double-quoted with "" escaping. A wrong
/// header throws CsvError; malformed data rows are skipped and tallied.
CsvReport parse_event_csv(std::istream& in, const EventSink& sink);
std::vector<ActivityEvent> parse_event_csv(std::istream& in, CsvReport* report = nullptr);

/// Writes events back out in the same format (RFC 3339 Z timestamps).
void write_event_csv(std::ostream& out, std::span<const ActivityEvent> events);

/// Splits one CSV record into fields, honoring double quotes. Returns false
/// on a malformed record (unbalanced quote, text after a closing quote).
bool split_csv_record(const std::string& line, std::vector<std::string>& fields);

/// Writes one field, quoting only when it contains a comma, quote, or newline.
void write_csv_field(std::ostream& out, const std::string& field);

}  // namespace qah
