#include "qah/csv.hpp"

#include <istream>
#include <ostream>

namespace qah {
namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return s.substr(b, e - b);
}

}  // namespace

CsvError::CsvError(const std::string& message, std::size_t line)
    : std::runtime_error(message + " (line " + std::to_string(line) + ")"), line_(line) {}

bool split_csv_record(const std::string& line, std::vector<std::string>& fields) {
    fields.clear();
    std::string field;
    bool in_quotes = false;
    bool was_quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"') {
            if (!field.empty() || was_quoted) return false;  // quote in mid-field
            in_quotes = true;
            was_quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
            was_quoted = false;
        } else {
            if (was_quoted && c != '\r') return false;  // text after closing quote
            field.push_back(c);
        }
    }
    if (in_quotes) return false;
    fields.push_back(std::move(field));
    return true;
}

CsvReport parse_event_csv(std::istream& in, const EventSink& sink) {
    CsvReport report;
    std::string line;
    std::vector<std::string> fields;

    if (!std::getline(in, line)) throw CsvError("empty input, expected a header", 1);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!split_csv_record(line, fields) || fields.size() != 3 ||
        trim(fields[0]) != "user_id" || trim(fields[1]) != "timestamp" || trim(fields[2]) != "kind") {
        throw CsvError("expected header 'user_id,timestamp,kind', got '" + line + "'", 1);
    }

    ActivityEvent event;
    std::size_t line_no = 1;
    auto record_skip = [&report](std::size_t n) {
        ++report.skipped;
        if (report.skipped_lines.size() < CsvReport::kMaxRecorded) report.skipped_lines.push_back(n);
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;  // blank lines carry no data
        ++report.rows;
        if (!split_csv_record(line, fields) || fields.size() != 3) {
            record_skip(line_no);
            continue;
        }
        const std::string user = trim(fields[0]);
        const std::optional<Timestamp> ts = parse_timestamp(trim(fields[1]));
        const std::optional<EventKind> kind = parse_event_kind(trim(fields[2]));
        if (user.empty() || !ts || !kind) {
            record_skip(line_no);
            continue;
        }
        event.user_id = user;
        event.timestamp = *ts;
        event.kind = *kind;
        ++report.events;
        sink(event);
    }
    return report;
}

std::vector<ActivityEvent> parse_event_csv(std::istream& in, CsvReport* report) {
    std::vector<ActivityEvent> events;
    const CsvReport r = parse_event_csv(in, [&events](const ActivityEvent& ev) { events.push_back(ev); });
    if (report != nullptr) *report = r;
    return events;
}

void write_csv_field(std::ostream& out, const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) {
        out << field;
        return;
    }
    out << '"';
    for (char c : field) {
        if (c == '"') out << '"';
        out << c;
    }
    out << '"';
}

void write_event_csv(std::ostream& out, std::span<const ActivityEvent> events) {
    out << "user_id,timestamp,kind\n";
    for (const ActivityEvent& ev : events) {
        write_csv_field(out, ev.user_id);
        out << ',' << format_timestamp(ev.timestamp) << ',' << to_string(ev.kind) << '\n';
    }
}

}  // namespace qah
