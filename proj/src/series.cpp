#include "qah/series.hpp"

#include <numeric>
#include <ostream>

#include "qah/csv.hpp"

namespace qah {

std::uint64_t UserActivitySeries::total_questions() const {
    return std::accumulate(questions.begin(), questions.end(), std::uint64_t{0});
}

std::uint64_t UserActivitySeries::total_answers() const {
    return std::accumulate(answers.begin(), answers.end(), std::uint64_t{0});
}

std::uint64_t UserActivitySeries::total_activity() const {
    return total_questions() + total_answers();
}

int UserActivitySeries::active_months() const {
    int active = 0;
    for (std::size_t i = 0; i < questions.size(); ++i) {
        if (questions[i] > 0 || answers[i] > 0) ++active;
    }
    return active;
}

int UserActivitySeries::first_active_month() const {
    for (std::size_t i = 0; i < questions.size(); ++i) {
        if (questions[i] > 0 || answers[i] > 0) return static_cast<int>(i);
    }
    return -1;
}

int UserActivitySeries::last_active_month() const {
    for (std::size_t i = questions.size(); i-- > 0;) {
        if (questions[i] > 0 || answers[i] > 0) return static_cast<int>(i);
    }
    return -1;
}

int UserActivitySeries::tenure_months() const {
    const int first = first_active_month();
    if (first < 0) return 0;
    return last_active_month() - first;
}

SeriesBuild build_user_series(std::span<const ActivityEvent> events, const InstanceWindow& window) {
    SeriesBuild build;
    const auto slots = static_cast<std::size_t>(window.month_count);
    for (const ActivityEvent& ev : events) {
        const std::optional<int> index = window.index_of(month_of(ev.timestamp));
        if (!index) {
            ++build.dropped;
            continue;
        }
        auto [it, inserted] = build.users.try_emplace(ev.user_id);
        UserActivitySeries& series = it->second;
        if (inserted) {
            series.user_id = ev.user_id;
            series.questions.assign(slots, 0);
            series.answers.assign(slots, 0);
        }
        const auto slot = static_cast<std::size_t>(*index);
        if (ev.kind == EventKind::Question) {
            ++series.questions[slot];
        } else {
            ++series.answers[slot];
        }
        ++build.events;
    }
    return build;
}

std::vector<ActivityEvent> truncate_events(std::span<const ActivityEvent> events, YearMonth cutoff) {
    std::vector<ActivityEvent> kept;
    for (const ActivityEvent& ev : events) {
        if (!(cutoff < month_of(ev.timestamp))) kept.push_back(ev);
    }
    return kept;
}

MonthlyTotals total_activity(const SeriesMap& users, int month_count) {
    MonthlyTotals totals;
    const auto slots = static_cast<std::size_t>(month_count);
    totals.questions.assign(slots, 0);
    totals.answers.assign(slots, 0);
    totals.combined.assign(slots, 0);
    for (const auto& [id, series] : users) {
        for (std::size_t i = 0; i < slots; ++i) {
            totals.questions[i] += series.questions[i];
            totals.answers[i] += series.answers[i];
            totals.combined[i] += series.questions[i] + series.answers[i];
        }
    }
    return totals;
}

void write_series_csv(std::ostream& out, const SeriesMap& users) {
    out << "user_id,kind,month_index,count\n";
    for (const auto& [id, series] : users) {
        for (std::size_t i = 0; i < series.questions.size(); ++i) {
            write_csv_field(out, id);
            out << ",questions," << i << ',' << series.questions[i] << '\n';
        }
        for (std::size_t i = 0; i < series.answers.size(); ++i) {
            write_csv_field(out, id);
            out << ",answers," << i << ',' << series.answers[i] << '\n';
        }
    }
}

}  // namespace qah
