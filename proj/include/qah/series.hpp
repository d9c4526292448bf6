#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "qah/events.hpp"

namespace qah {

/// Per-user monthly activity counts across the instance window. `answers`
/// pools answers and comments: both are responses to someone else's need,
/// which is the behavior the features care about.
struct UserActivitySeries {
    std::string user_id;
    std::vector<std::uint32_t> questions;  // one slot per window month
    std::vector<std::uint32_t> answers;

    std::uint64_t total_questions() const;
    std::uint64_t total_answers() const;
    std::uint64_t total_activity() const;
    int active_months() const;       // months with any activity
    int first_active_month() const;  // -1 when the series is all zero
    int last_active_month() const;
    /// Months between first and last activity, exclusive of the first:
    /// a single-burst user has tenure 0.
    int tenure_months() const;
};

/// Keyed by user id; ordered so every traversal is deterministic.
using SeriesMap = std::map<std::string, UserActivitySeries>;

struct SeriesBuild {
    SeriesMap users;
    std::uint64_t events = 0;   // events that landed in the window
    std::uint64_t dropped = 0;  // events outside the window (cutoff or stray)
};

SeriesBuild build_user_series(std::span<const ActivityEvent> events, const InstanceWindow& window);

/// Events at or before the last second of `cutoff`.
std::vector<ActivityEvent> truncate_events(std::span<const ActivityEvent> events, YearMonth cutoff);

/// Instance-level monthly sums over all users.
struct MonthlyTotals {
    std::vector<std::uint64_t> questions;
    std::vector<std::uint64_t> answers;
    std::vector<std::uint64_t> combined;
};

MonthlyTotals total_activity(const SeriesMap& users, int month_count);

/// Long-form export: `user_id,kind,month_index,count`, one line per
/// (user, kind, month), kinds `questions` then `answers`, zeros included.
void write_series_csv(std::ostream& out, const SeriesMap& users);

}  // namespace qah
