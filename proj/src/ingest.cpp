#include "qah/ingest.hpp"

#include <stdexcept>
#include <string_view>

#include "qah/xml_rows.hpp"

namespace qah {
namespace {

std::string_view trimmed(const std::string* s) {
    if (s == nullptr) return {};
    std::string_view v = *s;
    while (!v.empty() && (v.front() == ' ' || v.front() == '\t' || v.front() == '\r' ||
                          v.front() == '\n')) {
        v.remove_prefix(1);
    }
    while (!v.empty() &&
           (v.back() == ' ' || v.back() == '\t' || v.back() == '\r' || v.back() == '\n')) {
        v.remove_suffix(1);
    }
    return v;
}

/// Runs one dump pass with per-row field extraction done by `classify`,
/// which returns true and fills `kind` when the row carries an event.
SkipReport run_rows(RowXmlReader& reader, const EventSink& sink,
                    const char* user_attr,
                    const std::function<bool(const XmlRow&, SkipReport&, EventKind&)>& classify) {
    SkipReport report;
    XmlRow row;
    ActivityEvent event;
    while (reader.next(row)) {
        ++report.rows;
        if (row.name != "row") {
            ++report.skipped;
            ++report.unexpected_element;
            continue;
        }
        EventKind kind{};
        if (!classify(row, report, kind)) {
            ++report.skipped;
            continue;
        }
        const std::string_view user = trimmed(row.find(user_attr));
        if (user.empty()) {
            ++report.skipped;
            ++report.missing_user;
            continue;
        }
        const std::string* created = row.find("CreationDate");
        std::optional<Timestamp> ts;
        if (created != nullptr) ts = parse_timestamp(*created);
        if (!ts) {
            ++report.skipped;
            ++report.bad_timestamp;
            continue;
        }
        event.user_id.assign(user);
        event.timestamp = *ts;
        event.kind = kind;
        ++report.events;
        sink(event);
    }
    return report;
}

SkipReport run_posts(RowXmlReader& reader, const EventSink& sink) {
    return run_rows(reader, sink, "OwnerUserId",
                    [](const XmlRow& row, SkipReport& report, EventKind& kind) {
                        const std::string* type = row.find("PostTypeId");
                        if (type != nullptr && *type == "1") {
                            kind = EventKind::Question;
                            return true;
                        }
                        if (type != nullptr && *type == "2") {
                            kind = EventKind::Answer;
                            return true;
                        }
                        ++report.ignored_post_type;
                        return false;
                    });
}

SkipReport run_comments(RowXmlReader& reader, const EventSink& sink) {
    return run_rows(reader, sink, "UserId",
                    [](const XmlRow&, SkipReport&, EventKind& kind) {
                        kind = EventKind::Comment;
                        return true;
                    });
}

std::vector<ActivityEvent> collect(SkipReport (*parse)(std::istream&, const EventSink&),
                                   std::istream& in, SkipReport* report) {
    std::vector<ActivityEvent> events;
    const SkipReport r = parse(in, [&events](const ActivityEvent& ev) { events.push_back(ev); });
    if (report != nullptr) *report = r;
    return events;
}

}  // namespace

SkipReport& SkipReport::operator+=(const SkipReport& other) {
    rows += other.rows;
    events += other.events;
    skipped += other.skipped;
    missing_user += other.missing_user;
    bad_timestamp += other.bad_timestamp;
    ignored_post_type += other.ignored_post_type;
    unexpected_element += other.unexpected_element;
    return *this;
}

SkipReport parse_stackexchange_posts(std::istream& in, const EventSink& sink) {
    RowXmlReader reader(in);
    if (reader.root_name() != "posts") {
        throw std::runtime_error("expected a <posts> document, found <" + reader.root_name() + ">");
    }
    return run_posts(reader, sink);
}

SkipReport parse_stackexchange_comments(std::istream& in, const EventSink& sink) {
    RowXmlReader reader(in);
    if (reader.root_name() != "comments") {
        throw std::runtime_error("expected a <comments> document, found <" + reader.root_name() + ">");
    }
    return run_comments(reader, sink);
}

SkipReport parse_stackexchange_xml(std::istream& in, const EventSink& sink) {
    RowXmlReader reader(in);
    if (reader.root_name() == "posts") return run_posts(reader, sink);
    if (reader.root_name() == "comments") return run_comments(reader, sink);
    throw std::runtime_error("unrecognized dump root <" + reader.root_name() +
                             ">; expected <posts> or <comments>");
}

std::vector<ActivityEvent> parse_stackexchange_posts(std::istream& in, SkipReport* report) {
    return collect([](std::istream& s, const EventSink& k) { return parse_stackexchange_posts(s, k); }, in, report);
}

std::vector<ActivityEvent> parse_stackexchange_comments(std::istream& in, SkipReport* report) {
    return collect([](std::istream& s, const EventSink& k) { return parse_stackexchange_comments(s, k); }, in, report);
}

std::vector<ActivityEvent> parse_stackexchange_xml(std::istream& in, SkipReport* report) {
    return collect([](std::istream& s, const EventSink& k) { return parse_stackexchange_xml(s, k); }, in, report);
}

}  // namespace qah
