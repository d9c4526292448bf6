#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qah/features.hpp"
#include "qah/kmeans.hpp"
#include "qah/series.hpp"

namespace qah {

/// The four Activity Archetypes, in ascending order of activity volume.
enum class Archetype { NonRecurring, Sporadic, Frequent, Permanent };

std::string_view to_string(Archetype a);

/// Name attached to one cluster: an archetype when the Boolean-corner
/// mapping succeeds, otherwise Variant(i).
struct ClusterLabel {
    int cluster = 0;
    std::optional<Archetype> archetype;
    int variant = -1;  // set when archetype is empty

    std::string name() const;  // "Frequent" or "Variant(2)"
};

/// Snaps each centroid's (many_peaks, duplicate_max) coordinates to the
/// nearest Boolean corner:
///
///     (0,0) NonRecurring   (0,1) Sporadic
///     (1,0) Frequent       (1,1) Permanent
///
/// With k == 4 and the four corners hit exactly once each, the archetype
/// names apply. Any collision, or k != 4, turns every cluster into
/// Variant(i), i assigned in ascending order of `cluster_activity[c]`
/// (total questions + answers of cluster c's members), ties by cluster
/// index.
std::vector<ClusterLabel> label_clusters(std::span<const FeaturePoint> centroids,
                                         std::span<const double> cluster_activity);

/// Descriptive statistics for one named cluster.
struct ArchetypeStats {
    std::string name;
    std::optional<Archetype> archetype;
    int cluster = 0;
    std::size_t users = 0;
    double user_fraction = 0.0;
    double median_questions = 0.0;
    double median_answers = 0.0;
    double median_active_months = 0.0;
    double median_tenure_months = 0.0;
    std::uint64_t total_questions = 0;
    std::uint64_t total_answers = 0;
    // Share of the instance's activity of each kind; absent when the whole
    // instance has none of that kind.
    std::optional<double> question_fraction;
    std::optional<double> answer_fraction;
};

/// Median with the usual even-count convention (mean of the two middle
/// values). Throws std::invalid_argument on an empty sample.
double median(std::vector<double> values);

/// Per-cluster statistics. `rows` pairs with `labels` index-for-index.
/// Output order: named archetypes in enum order when naming succeeded,
/// otherwise Variants in ascending variant index.
std::vector<ArchetypeStats> archetype_stats(std::span<const UserActivitySeries* const> rows,
                                            std::span<const int> labels,
                                            std::span<const ClusterLabel> names);

enum class InstanceType { Emerging, Transitioning, Sustainable };

std::string_view to_string(InstanceType t);

/// Raised when the maturity rule needs the four named archetypes but the
/// clustering could not be named.
class ClassificationError : public std::runtime_error {
public:
    explicit ClassificationError(const std::string& message) : std::runtime_error(message) {}
};

/// Maturity rule. Emerging when k_star > 4. Otherwise the four named
/// archetypes must be present (else ClassificationError "unnamed
/// clusters"): the instance is Sustainable when the combined answer
/// activity of Sporadic, Frequent and Permanent reaches `threshold` times
/// the NonRecurring answer activity, else Transitioning.
InstanceType classify_instance(int k_star, std::span<const ArchetypeStats> stats,
                               double threshold = 0.9);

struct TrendResult {
    double slope = 0.0;
    bool degenerate = false;  // constant totals: min-max normalization undefined
};

/// Slope of the ordinary-least-squares line through the min-max normalized
/// monthly totals against month index 0..n-1. Constant input reports slope
/// 0 with the degenerate flag set.
TrendResult trend_slope(std::span<const std::uint64_t> totals);

}  // namespace qah
