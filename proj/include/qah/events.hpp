#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qah/time.hpp"

namespace qah {

enum class EventKind { Question, Answer, Comment };

std::string_view to_string(EventKind kind);
std::optional<EventKind> parse_event_kind(std::string_view text);  // case-insensitive

/// One user action on the instance.
struct ActivityEvent {
    std::string user_id;  // non-empty, already trimmed
    Timestamp timestamp;
    EventKind kind = EventKind::Question;

    friend bool operator==(const ActivityEvent&, const ActivityEvent&) = default;
};

/// Stable order by (timestamp, user_id, kind).
void sort_events(std::vector<ActivityEvent>& events);

/// The observation window: a closed range of calendar months.
struct InstanceWindow {
    YearMonth start{};
    YearMonth end{};
    int month_count = 0;

    /// Index of ym within the window, or nullopt outside it.
    std::optional<int> index_of(YearMonth ym) const;
    YearMonth month_at(int index) const;

    friend bool operator==(const InstanceWindow&, const InstanceWindow&) = default;
};

/// Throws std::invalid_argument when end precedes start.
InstanceWindow make_window(YearMonth start, YearMonth end);

/// Window spanning the events' calendar months. `end_override` replaces the
/// final month (an observation cutoff); events past it are dropped by the
/// series builder, not here. Throws std::invalid_argument on an empty event
/// set or an override before the first event's month.
InstanceWindow derive_window(std::span<const ActivityEvent> events,
                             std::optional<YearMonth> end_override = {});

}  // namespace qah
