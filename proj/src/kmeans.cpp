#include "qah/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qah/rng.hpp"

namespace qah {
namespace {

/// Slack for "non-increasing" checks under floating-point summation drift.
double cost_slack(double reference) {
    return 1e-12 * (1.0 + std::abs(reference));
}

std::vector<std::size_t> cluster_sizes(std::span<const int> labels, int k) {
    std::vector<std::size_t> sizes(static_cast<std::size_t>(k), 0);
    for (int label : labels) ++sizes[static_cast<std::size_t>(label)];
    return sizes;
}

std::vector<FeaturePoint> cluster_means(std::span<const FeaturePoint> points,
                                        std::span<const int> labels, int k) {
    std::vector<FeaturePoint> means(static_cast<std::size_t>(k), FeaturePoint{0, 0, 0});
    const std::vector<std::size_t> sizes = cluster_sizes(labels, k);
    for (std::size_t i = 0; i < points.size(); ++i) {
        FeaturePoint& m = means[static_cast<std::size_t>(labels[i])];
        for (std::size_t d = 0; d < m.size(); ++d) m[d] += points[i][d];
    }
    for (int c = 0; c < k; ++c) {
        const std::size_t size = sizes[static_cast<std::size_t>(c)];
        if (size == 0) throw std::logic_error("mean of an empty cluster");
        for (double& coord : means[static_cast<std::size_t>(c)]) {
            coord /= static_cast<double>(size);
        }
    }
    return means;
}

std::vector<int> assign_labels(std::span<const FeaturePoint> points,
                               std::span<const FeaturePoint> centroids) {
    std::vector<int> labels(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        labels[i] = nearest_centroid(points[i], centroids);
    }
    return labels;
}

/// Gives every empty cluster the point currently farthest from its centroid,
/// never stealing the last member of a donor cluster. Never increases the
/// clustering cost (the moved point's term drops to zero). Returns the
/// number of clusters repaired.
std::size_t repair_empty_clusters(std::span<const FeaturePoint> points,
                                  std::vector<FeaturePoint>& centroids, std::vector<int>& labels) {
    const int k = static_cast<int>(centroids.size());
    std::size_t repairs = 0;
    std::vector<std::size_t> sizes = cluster_sizes(labels, k);
    for (int c = 0; c < k; ++c) {
        if (sizes[static_cast<std::size_t>(c)] > 0) continue;
        ++repairs;
        std::size_t farthest = points.size();
        double farthest_d2 = -1.0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            const auto owner = static_cast<std::size_t>(labels[i]);
            if (sizes[owner] <= 1) continue;
            const double d2 = squared_distance(points[i], centroids[owner]);
            if (d2 > farthest_d2) {
                farthest_d2 = d2;
                farthest = i;
            }
        }
        if (farthest == points.size()) throw std::logic_error("cannot repair empty cluster");
        --sizes[static_cast<std::size_t>(labels[farthest])];
        labels[farthest] = c;
        sizes[static_cast<std::size_t>(c)] = 1;
        centroids[static_cast<std::size_t>(c)] = points[farthest];
    }
    return repairs;
}

}  // namespace

double squared_distance(const FeaturePoint& a, const FeaturePoint& b) {
    double sum = 0.0;
    for (std::size_t d = 0; d < a.size(); ++d) {
        const double diff = a[d] - b[d];
        sum += diff * diff;
    }
    return sum;
}

double point_distance(const FeaturePoint& a, const FeaturePoint& b) {
    return std::sqrt(squared_distance(a, b));
}

int nearest_centroid(const FeaturePoint& p, std::span<const FeaturePoint> centroids) {
    int best = 0;
    double best_d2 = squared_distance(p, centroids[0]);
    for (std::size_t c = 1; c < centroids.size(); ++c) {
        const double d2 = squared_distance(p, centroids[c]);
        if (d2 < best_d2) {  // ties keep the lowest index
            best_d2 = d2;
            best = static_cast<int>(c);
        }
    }
    return best;
}

double clustering_cost(std::span<const FeaturePoint> points,
                       std::span<const FeaturePoint> centroids, std::span<const int> labels) {
    if (points.empty()) return 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        sum += squared_distance(points[i], centroids[static_cast<std::size_t>(labels[i])]);
    }
    return sum / static_cast<double>(points.size());
}

std::size_t count_distinct_points(std::span<const FeaturePoint> points) {
    std::vector<FeaturePoint> sorted(points.begin(), points.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    return sorted.size();
}

std::vector<FeaturePoint> kmeanspp_init(std::span<const FeaturePoint> points, int k,
                                        std::uint64_t seed) {
    if (k <= 0) throw std::invalid_argument("k must be positive");
    if (count_distinct_points(points) < static_cast<std::size_t>(k)) {
        throw std::invalid_argument("k exceeds the number of distinct points");
    }
    std::mt19937_64 rng(seed);
    std::vector<FeaturePoint> centroids;
    centroids.reserve(static_cast<std::size_t>(k));
    centroids.push_back(points[uniform_index(rng, points.size())]);

    std::vector<double> d2(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        d2[i] = squared_distance(points[i], centroids[0]);
    }
    while (centroids.size() < static_cast<std::size_t>(k)) {
        double total = 0.0;
        for (double w : d2) total += w;
        // total > 0 is guaranteed: fewer centres than distinct points means
        // some point is not yet at distance zero.
        const double target = canonical_double(rng) * total;
        double running = 0.0;
        std::size_t chosen = points.size();
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (d2[i] <= 0.0) continue;
            running += d2[i];
            chosen = i;
            if (running > target) break;
        }
        if (chosen == points.size()) throw std::logic_error("k-means++ found no candidate");
        centroids.push_back(points[chosen]);
        for (std::size_t i = 0; i < points.size(); ++i) {
            d2[i] = std::min(d2[i], squared_distance(points[i], centroids.back()));
        }
    }
    return centroids;
}

ClusterModel lloyd(std::span<const FeaturePoint> points, std::vector<FeaturePoint> centroids,
                   int max_iterations, double tol) {
    if (points.empty()) throw std::invalid_argument("cannot cluster zero points");
    if (centroids.empty()) throw std::invalid_argument("cannot cluster with zero centroids");

    // Termination is the assignment fixed point: there the centroid movement
    // is exactly zero (below any tol) and both converged-model invariants
    // hold simultaneously. A movement-below-tol round that still changed
    // labels keeps iterating, since stopping there would leave labels that
    // are not nearest-centroid.
    (void)tol;
    const int k = static_cast<int>(centroids.size());
    std::vector<int> labels = assign_labels(points, centroids);
    repair_empty_clusters(points, centroids, labels);

    double previous_cost = std::numeric_limits<double>::infinity();
    int iterations = 0;
    while (iterations < max_iterations) {
        ++iterations;
        centroids = cluster_means(points, labels, k);
        std::vector<int> next = assign_labels(points, centroids);
        const std::size_t repairs = repair_empty_clusters(points, centroids, next);
        const double cost = clustering_cost(points, centroids, next);
        if (cost > previous_cost + cost_slack(previous_cost)) {
            throw std::logic_error("k-means cost increased between iterations");
        }
        previous_cost = cost;
        // A repair leaves the donor centroid off its mean, so a repaired
        // round is never a stopping state even when labels did not change.
        if (repairs == 0 && next == labels) break;
        labels = std::move(next);
    }

    ClusterModel model;
    model.k = k;
    model.centroids = std::move(centroids);
    model.labels = std::move(labels);
    model.cost = previous_cost;
    model.iterations = iterations;
    return model;
}

void ClusterModel::verify(std::span<const FeaturePoint> points, double tol) const {
    if (labels.size() != points.size()) throw std::logic_error("label count mismatch");
    if (static_cast<int>(centroids.size()) != k) throw std::logic_error("centroid count mismatch");
    const std::vector<std::size_t> sizes = cluster_sizes(labels, k);
    for (std::size_t c = 0; c < sizes.size(); ++c) {
        if (sizes[c] == 0) throw std::logic_error("cluster " + std::to_string(c) + " is empty");
    }
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (labels[i] != nearest_centroid(points[i], centroids)) {
            throw std::logic_error("point " + std::to_string(i) + " is not labeled by its nearest centroid");
        }
    }
    const std::vector<FeaturePoint> means = cluster_means(points, labels, k);
    for (int c = 0; c < k; ++c) {
        for (std::size_t d = 0; d < 3; ++d) {
            const double delta = std::abs(means[static_cast<std::size_t>(c)][d] -
                                          centroids[static_cast<std::size_t>(c)][d]);
            if (delta > tol) throw std::logic_error("centroid " + std::to_string(c) + " is not its cluster mean");
        }
    }
    const double recomputed = clustering_cost(points, centroids, labels);
    if (std::abs(recomputed - cost) > cost_slack(cost)) {
        throw std::logic_error("stored cost does not match the assignment");
    }
}

double mean_silhouette(std::span<const FeaturePoint> points, std::span<const int> labels) {
    const std::size_t n = points.size();
    if (n == 0 || labels.size() != n) throw std::invalid_argument("silhouette needs labeled points");
    int k = 0;
    for (int label : labels) k = std::max(k, label + 1);
    const std::vector<std::size_t> sizes = cluster_sizes(labels, k);
    std::size_t populated = 0;
    for (std::size_t size : sizes) populated += size > 0 ? 1 : 0;
    if (populated < 2) throw std::invalid_argument("silhouette undefined for k=1");

    std::vector<double> sum(static_cast<std::size_t>(k));
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        std::fill(sum.begin(), sum.end(), 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            sum[static_cast<std::size_t>(labels[j])] += point_distance(points[i], points[j]);
        }
        const auto own = static_cast<std::size_t>(labels[i]);
        if (sizes[own] <= 1) continue;  // singleton: contributes 0
        const double a = sum[own] / static_cast<double>(sizes[own] - 1);
        double b = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < sizes.size(); ++c) {
            if (c == own || sizes[c] == 0) continue;
            b = std::min(b, sum[c] / static_cast<double>(sizes[c]));
        }
        const double denom = std::max(a, b);
        if (denom > 0.0) total += (b - a) / denom;
    }
    return total / static_cast<double>(n);
}

KSelection select_k(std::span<const FeaturePoint> points, std::uint64_t seed, int k_min, int k_max,
                    int restarts) {
    if (k_min < 2) throw std::invalid_argument("k_min must be at least 2");
    if (k_max < k_min) throw std::invalid_argument("k_max must be at least k_min");
    if (restarts < 1) throw std::invalid_argument("restarts must be positive");
    const std::size_t distinct = count_distinct_points(points);
    if (distinct < static_cast<std::size_t>(k_min)) {
        throw std::invalid_argument("only " + std::to_string(distinct) +
                                    " distinct feature points; need at least " + std::to_string(k_min));
    }

    KSelection selection;
    selection.k_min = k_min;
    selection.k_max = k_max;
    if (distinct < static_cast<std::size_t>(k_max)) {
        selection.k_max = static_cast<int>(distinct);
        selection.clamped = true;
    }

    double best_sil = -std::numeric_limits<double>::infinity();
    for (int k = k_min; k <= selection.k_max; ++k) {
        ClusterModel best_run;
        double best_cost = std::numeric_limits<double>::infinity();
        for (int r = 0; r < restarts; ++r) {
            const std::uint64_t run_seed = mix_seed(mix_seed(seed, static_cast<std::uint64_t>(k)),
                                                    static_cast<std::uint64_t>(r));
            ClusterModel run = lloyd(points, kmeanspp_init(points, k, run_seed));
            if (run.cost < best_cost) {
                best_cost = run.cost;
                best_run = std::move(run);
            }
        }
        best_run.mean_silhouette = mean_silhouette(points, best_run.labels);
        selection.per_k[k] = best_run.mean_silhouette;
        if (best_run.mean_silhouette > best_sil + 1e-12) {  // ties keep the smaller K
            best_sil = best_run.mean_silhouette;
            selection.k_star = k;
            selection.model = std::move(best_run);
        }
    }
    return selection;
}

KSelection random_baseline(std::span<const FeaturePoint> points, std::uint64_t seed,
                           int k_min, int k_max) {
    if (k_min < 2) throw std::invalid_argument("k_min must be at least 2");
    if (k_max < k_min) throw std::invalid_argument("k_max must be at least k_min");
    if (points.empty()) throw std::invalid_argument("cannot label zero points");

    KSelection selection;
    selection.k_min = k_min;
    selection.k_max = k_max;
    double best_sil = -std::numeric_limits<double>::infinity();
    for (int k = k_min; k <= k_max; ++k) {
        std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(k)));
        std::vector<int> labels(points.size());
        for (int& label : labels) {
            label = static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(k)));
        }
        const double sil = mean_silhouette(points, labels);
        selection.per_k[k] = sil;
        if (sil > best_sil + 1e-12) {
            best_sil = sil;
            selection.k_star = k;
            selection.model.k = k;
            selection.model.labels = std::move(labels);
            selection.model.mean_silhouette = sil;
        }
    }
    return selection;
}

}  // namespace qah
