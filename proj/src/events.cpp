#include "qah/events.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>
#include <tuple>

namespace qah {

std::string_view to_string(EventKind kind) {
    switch (kind) {
        case EventKind::Question: return "question";
        case EventKind::Answer: return "answer";
        case EventKind::Comment: return "comment";
    }
    return "?";
}

std::optional<EventKind> parse_event_kind(std::string_view text) {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "question") return EventKind::Question;
    if (lower == "answer") return EventKind::Answer;
    if (lower == "comment") return EventKind::Comment;
    return std::nullopt;
}

void sort_events(std::vector<ActivityEvent>& events) {
    std::stable_sort(events.begin(), events.end(), [](const ActivityEvent& a, const ActivityEvent& b) {
        return std::tie(a.timestamp.seconds, a.user_id, a.kind) <
               std::tie(b.timestamp.seconds, b.user_id, b.kind);
    });
}

std::optional<int> InstanceWindow::index_of(YearMonth ym) const {
    if (ym < start || end < ym) return std::nullopt;
    return month_span(start, ym) - 1;
}

YearMonth InstanceWindow::month_at(int index) const {
    return add_months(start, index);
}

InstanceWindow make_window(YearMonth start, YearMonth end) {
    if (end < start) {
        throw std::invalid_argument("window end " + to_string(end) + " precedes start " + to_string(start));
    }
    return {start, end, month_span(start, end)};
}

InstanceWindow derive_window(std::span<const ActivityEvent> events,
                             std::optional<YearMonth> end_override) {
    if (events.empty()) throw std::invalid_argument("no events");
    YearMonth lo = month_of(events.front().timestamp);
    YearMonth hi = lo;
    for (const ActivityEvent& ev : events.subspan(1)) {
        const YearMonth ym = month_of(ev.timestamp);
        lo = std::min(lo, ym);
        hi = std::max(hi, ym);
    }
    if (end_override) {
        if (*end_override < lo) {
            throw std::invalid_argument("cutoff month " + to_string(*end_override) +
                                        " precedes the first event month " + to_string(lo));
        }
        hi = *end_override;
    }
    return make_window(lo, hi);
}

}  // namespace qah
