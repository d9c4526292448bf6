#include "qah/archetype.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qah {
namespace {

Archetype corner_archetype(bool many, bool dup) {
    if (many) return dup ? Archetype::Permanent : Archetype::Frequent;
    return dup ? Archetype::Sporadic : Archetype::NonRecurring;
}

std::vector<ClusterLabel> variant_labels(std::size_t k, std::span<const double> cluster_activity) {
    std::vector<int> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return cluster_activity[static_cast<std::size_t>(a)] <
               cluster_activity[static_cast<std::size_t>(b)];
    });
    std::vector<ClusterLabel> labels(k);
    for (std::size_t rank = 0; rank < k; ++rank) {
        const int c = order[rank];
        labels[static_cast<std::size_t>(c)] =
            ClusterLabel{c, std::nullopt, static_cast<int>(rank)};
    }
    return labels;
}

}  // namespace

std::string_view to_string(Archetype a) {
    switch (a) {
        case Archetype::NonRecurring: return "NonRecurring";
        case Archetype::Sporadic: return "Sporadic";
        case Archetype::Frequent: return "Frequent";
        case Archetype::Permanent: return "Permanent";
    }
    return "?";
}

std::string_view to_string(InstanceType t) {
    switch (t) {
        case InstanceType::Emerging: return "Emerging";
        case InstanceType::Transitioning: return "Transitioning";
        case InstanceType::Sustainable: return "Sustainable";
    }
    return "?";
}

std::string ClusterLabel::name() const {
    if (archetype) return std::string(to_string(*archetype));
    return "Variant(" + std::to_string(variant) + ")";
}

std::vector<ClusterLabel> label_clusters(std::span<const FeaturePoint> centroids,
                                         std::span<const double> cluster_activity) {
    const std::size_t k = centroids.size();
    if (cluster_activity.size() != k) {
        throw std::invalid_argument("cluster_activity size must match the number of centroids");
    }
    if (k != 4) return variant_labels(k, cluster_activity);

    std::vector<ClusterLabel> labels(k);
    std::array<int, 4> corner_hits{0, 0, 0, 0};
    for (std::size_t c = 0; c < k; ++c) {
        const bool many = centroids[c][0] >= 0.5;  // nearest corner coordinate
        const bool dup = centroids[c][1] >= 0.5;
        const Archetype a = corner_archetype(many, dup);
        ++corner_hits[static_cast<std::size_t>(a)];
        labels[c] = ClusterLabel{static_cast<int>(c), a, -1};
    }
    for (int hits : corner_hits) {
        if (hits != 1) return variant_labels(k, cluster_activity);  // collision
    }
    return labels;
}

double median(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("median of an empty sample");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

std::vector<ArchetypeStats> archetype_stats(std::span<const UserActivitySeries* const> rows,
                                            std::span<const int> labels,
                                            std::span<const ClusterLabel> names) {
    if (rows.size() != labels.size()) throw std::invalid_argument("rows and labels disagree in size");
    const std::size_t k = names.size();

    struct Accumulator {
        std::vector<double> questions, answers, active, tenure;
        std::uint64_t total_questions = 0, total_answers = 0;
    };
    std::vector<Accumulator> acc(k);
    std::uint64_t instance_questions = 0;
    std::uint64_t instance_answers = 0;

    for (std::size_t i = 0; i < rows.size(); ++i) {
        const UserActivitySeries& s = *rows[i];
        Accumulator& a = acc[static_cast<std::size_t>(labels[i])];
        const std::uint64_t q = s.total_questions();
        const std::uint64_t ans = s.total_answers();
        a.questions.push_back(static_cast<double>(q));
        a.answers.push_back(static_cast<double>(ans));
        a.active.push_back(s.active_months());
        a.tenure.push_back(s.tenure_months());
        a.total_questions += q;
        a.total_answers += ans;
        instance_questions += q;
        instance_answers += ans;
    }

    // Named archetypes read best in enum order; Variants in index order.
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const ClusterLabel& la = names[a];
        const ClusterLabel& lb = names[b];
        if (la.archetype && lb.archetype) return *la.archetype < *lb.archetype;
        if (la.archetype != lb.archetype) return la.archetype.has_value();
        return la.variant < lb.variant;
    });

    std::vector<ArchetypeStats> stats;
    stats.reserve(k);
    for (std::size_t c : order) {
        const Accumulator& a = acc[c];
        ArchetypeStats s;
        s.name = names[c].name();
        s.archetype = names[c].archetype;
        s.cluster = names[c].cluster;
        s.users = a.questions.size();
        s.user_fraction = rows.empty() ? 0.0
                                       : static_cast<double>(s.users) / static_cast<double>(rows.size());
        if (s.users > 0) {
            s.median_questions = median(a.questions);
            s.median_answers = median(a.answers);
            s.median_active_months = median(a.active);
            s.median_tenure_months = median(a.tenure);
        }
        s.total_questions = a.total_questions;
        s.total_answers = a.total_answers;
        if (instance_questions > 0) {
            s.question_fraction = static_cast<double>(a.total_questions) /
                                  static_cast<double>(instance_questions);
        }
        if (instance_answers > 0) {
            s.answer_fraction = static_cast<double>(a.total_answers) /
                                static_cast<double>(instance_answers);
        }
        stats.push_back(std::move(s));
    }
    return stats;
}

InstanceType classify_instance(int k_star, std::span<const ArchetypeStats> stats, double threshold) {
    if (k_star > 4) return InstanceType::Emerging;

    std::optional<double> non_recurring;
    double others = 0.0;
    int named = 0;
    for (const ArchetypeStats& s : stats) {
        if (!s.archetype) continue;
        ++named;
        if (*s.archetype == Archetype::NonRecurring) {
            non_recurring = static_cast<double>(s.total_answers);
        } else {
            others += static_cast<double>(s.total_answers);
        }
    }
    if (named != 4 || !non_recurring) throw ClassificationError("unnamed clusters");
    return others >= threshold * *non_recurring ? InstanceType::Sustainable
                                                : InstanceType::Transitioning;
}

TrendResult trend_slope(std::span<const std::uint64_t> totals) {
    TrendResult result;
    if (totals.size() < 2) {
        result.degenerate = true;
        return result;
    }
    const auto [lo_it, hi_it] = std::minmax_element(totals.begin(), totals.end());
    const auto lo = static_cast<double>(*lo_it);
    const auto hi = static_cast<double>(*hi_it);
    if (hi <= lo) {
        result.degenerate = true;
        return result;
    }

    const std::size_t n = totals.size();
    double sum_x = 0.0, sum_y = 0.0, sum_xy = 0.0, sum_xx = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        const double x = static_cast<double>(t);
        const double y = (static_cast<double>(totals[t]) - lo) / (hi - lo);
        sum_x += x;
        sum_y += y;
        sum_xy += x * y;
        sum_xx += x * x;
    }
    const double nd = static_cast<double>(n);
    result.slope = (nd * sum_xy - sum_x * sum_y) / (nd * sum_xx - sum_x * sum_x);
    return result;
}

}  // namespace qah
