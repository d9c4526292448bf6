#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qah/archetype.hpp"
#include "qah/events.hpp"
#include "qah/features.hpp"
#include "qah/ingest.hpp"
#include "qah/kmeans.hpp"
#include "qah/pca.hpp"
#include "qah/series.hpp"

namespace qah {

struct AnalysisOptions {
    std::uint64_t seed = 42;
    int k_min = 2;
    int k_max = 10;
    int restarts = 10;
    int peak_threshold = kDefaultPeakThreshold;
    double sustainable_threshold = 0.9;
    std::optional<YearMonth> cutoff_month;  // observation cutoff override
    bool evolution = false;
    int evolution_step = 6;
    int evolution_horizon = 36;
    bool with_baseline = false;  // also compute the random-assignment baseline
};

/// Raised when the input stream yields nothing to analyze.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& message) : std::runtime_error(message) {}
};

/// One user's featurized series; `series` points into AnalysisResult::series.
struct UserFeatureRow {
    const UserActivitySeries* series = nullptr;
    FeatureVector questions;
    FeatureVector answers;
};

struct EvolutionPoint {
    int cutoff_month = 0;     // prefix length in months
    std::string outcome;      // type name, "insufficient data", or "unnamed clusters"
    std::optional<InstanceType> type;
};

struct AnalysisResult {
    InstanceWindow window;
    SeriesMap series;                  // owns the per-user series
    std::vector<UserFeatureRow> rows;  // user-id order, aligned with labels
    std::uint64_t events_in_window = 0;
    std::uint64_t dropped_events = 0;

    KSelection selection;       // clustering of the answers-based features
    PcaProjection pca;
    std::vector<ClusterLabel> cluster_labels;   // by cluster index
    std::vector<ArchetypeStats> stats;          // report order
    std::optional<InstanceType> instance_type;  // empty on refusal
    std::string classification_error;           // set on refusal
    TrendResult trend;
    std::size_t peak_count_p90 = 0;  // data-driven threshold suggestion (answers)
    std::optional<KSelection> baseline;
    std::vector<EvolutionPoint> evolution;

    std::vector<FeaturePoint> feature_points() const;  // answers features, row order
};

/// The full pipeline: window derivation, series, features, K selection,
/// naming, classification, trend, and (optionally) the evolution track.
/// The clustering runs on the answers-based features: the maturity rule is
/// defined over answer activity, and the paper's archetypes are described
/// by response behavior. Question features are computed, reported, and
/// exported, but do not drive the clustering.
///
/// Throws DataError when no events land in the window, and propagates
/// std::invalid_argument for degenerate feature sets (fewer than k_min
/// distinct vectors). Classification refusal is not an exception here; it
/// lands in `classification_error` so the report can surface it.
AnalysisResult analyze(std::span<const ActivityEvent> events, const AnalysisOptions& options);

}  // namespace qah
