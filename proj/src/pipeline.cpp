#include "qah/pipeline.hpp"

#include <algorithm>
#include <future>

#include "qah/rng.hpp"

namespace qah {
namespace {

/// Everything analyze() needs repeatedly, shared with evolution reruns.
struct CoreAnalysis {
    InstanceWindow window;
    SeriesBuild build;
    std::vector<UserFeatureRow> rows;
    std::vector<FeaturePoint> points;
};

CoreAnalysis run_core(std::span<const ActivityEvent> events, std::optional<YearMonth> cutoff,
                      int peak_threshold) {
    CoreAnalysis core;
    core.window = derive_window(events, cutoff);
    core.build = build_user_series(events, core.window);
    if (core.build.users.empty()) throw DataError("no events inside the window");

    core.rows.reserve(core.build.users.size());
    core.points.reserve(core.build.users.size());
    for (const auto& [id, series] : core.build.users) {
        UserFeatureRow row;
        row.series = &series;
        row.questions = extract_features(series.questions, peak_threshold);
        row.answers = extract_features(series.answers, peak_threshold);
        core.rows.push_back(row);
        core.points.push_back(row.answers.as_point());
    }
    return core;
}

/// Clusters, names, and classifies one (possibly truncated) event set.
/// Returns the outcome string and type used by evolution entries.
EvolutionPoint classify_checkpoint(std::span<const ActivityEvent> events, int cutoff,
                                   YearMonth cutoff_month, const AnalysisOptions& options) {
    EvolutionPoint point;
    point.cutoff_month = cutoff;

    const std::vector<ActivityEvent> prefix = truncate_events(events, cutoff_month);
    if (prefix.empty()) {
        point.outcome = "insufficient data";
        return point;
    }
    CoreAnalysis core = run_core(prefix, cutoff_month, options.peak_threshold);
    if (count_distinct_points(core.points) < static_cast<std::size_t>(options.k_max)) {
        point.outcome = "insufficient data";
        return point;
    }

    const std::uint64_t seed = mix_seed(options.seed, static_cast<std::uint64_t>(cutoff));
    const KSelection selection =
        select_k(core.points, seed, options.k_min, options.k_max, options.restarts);

    std::vector<double> cluster_activity(static_cast<std::size_t>(selection.model.k), 0.0);
    std::size_t i = 0;
    for (const auto& [id, series] : core.build.users) {
        cluster_activity[static_cast<std::size_t>(selection.model.labels[i])] +=
            static_cast<double>(series.total_activity());
        ++i;
    }
    const std::vector<ClusterLabel> names =
        label_clusters(selection.model.centroids, cluster_activity);

    std::vector<const UserActivitySeries*> rows;
    rows.reserve(core.rows.size());
    for (const UserFeatureRow& row : core.rows) rows.push_back(row.series);
    const std::vector<ArchetypeStats> stats =
        archetype_stats(rows, selection.model.labels, names);

    try {
        const InstanceType type =
            classify_instance(selection.k_star, stats, options.sustainable_threshold);
        point.type = type;
        point.outcome = std::string(to_string(type));
    } catch (const ClassificationError& error) {
        point.outcome = error.what();
    }
    return point;
}

}  // namespace

std::vector<FeaturePoint> AnalysisResult::feature_points() const {
    std::vector<FeaturePoint> points;
    points.reserve(rows.size());
    for (const UserFeatureRow& row : rows) points.push_back(row.answers.as_point());
    return points;
}

AnalysisResult analyze(std::span<const ActivityEvent> events, const AnalysisOptions& options) {
    if (events.empty()) throw DataError("no events");

    CoreAnalysis core = run_core(events, options.cutoff_month, options.peak_threshold);

    AnalysisResult result;
    result.window = core.window;
    result.events_in_window = core.build.events;
    result.dropped_events = core.build.dropped;

    result.selection = select_k(core.points, options.seed, options.k_min, options.k_max,
                                options.restarts);
    result.selection.model.verify(core.points);
    result.pca = pca_project(core.points);
    if (options.with_baseline) {
        result.baseline = random_baseline(core.points, mix_seed(options.seed, 0xBA5EULL),
                                          options.k_min, options.k_max);
    }

    std::vector<double> cluster_activity(static_cast<std::size_t>(result.selection.model.k), 0.0);
    {
        std::size_t i = 0;
        for (const auto& [id, series] : core.build.users) {
            cluster_activity[static_cast<std::size_t>(result.selection.model.labels[i])] +=
                static_cast<double>(series.total_activity());
            ++i;
        }
    }
    result.cluster_labels = label_clusters(result.selection.model.centroids, cluster_activity);

    {
        std::vector<const UserActivitySeries*> rows;
        rows.reserve(core.rows.size());
        for (const UserFeatureRow& row : core.rows) rows.push_back(row.series);
        result.stats = archetype_stats(rows, result.selection.model.labels, result.cluster_labels);
    }

    try {
        result.instance_type = classify_instance(result.selection.k_star, result.stats,
                                                 options.sustainable_threshold);
    } catch (const ClassificationError& error) {
        result.classification_error = error.what();
    }

    const MonthlyTotals totals = total_activity(core.build.users, core.window.month_count);
    result.trend = trend_slope(totals.combined);

    {
        std::vector<std::vector<std::uint32_t>> answer_series;
        answer_series.reserve(core.build.users.size());
        for (const auto& [id, series] : core.build.users) answer_series.push_back(series.answers);
        result.peak_count_p90 = peak_count_quantile(answer_series, 0.9);
    }

    if (options.evolution) {
        const int age = core.window.month_count;
        const int last = std::min(options.evolution_horizon, age);
        // Each checkpoint is a pure function of the truncated events and its
        // derived seed, so they run concurrently.
        std::vector<std::future<EvolutionPoint>> futures;
        for (int cutoff = options.evolution_step; cutoff <= last; cutoff += options.evolution_step) {
            const YearMonth cutoff_month = add_months(core.window.start, cutoff - 1);
            futures.push_back(std::async(std::launch::async, classify_checkpoint, events, cutoff,
                                         cutoff_month, std::cref(options)));
        }
        result.evolution.reserve(futures.size());
        for (auto& future : futures) result.evolution.push_back(future.get());
    }

    // Moving the map invalidates nothing: node addresses are stable, so the
    // row pointers taken above stay valid.
    result.series = std::move(core.build.users);
    result.rows = std::move(core.rows);
    return result;
}

}  // namespace qah
