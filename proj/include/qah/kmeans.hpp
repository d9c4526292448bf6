#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace qah {

using FeaturePoint = std::array<double, 3>;

double squared_distance(const FeaturePoint& a, const FeaturePoint& b);
double point_distance(const FeaturePoint& a, const FeaturePoint& b);

/// A converged clustering. Invariants (checked by verify()):
///   - labels[i] is the nearest centroid of point i, ties to the lowest index
///   - every centroid is the mean of its member points
///   - no cluster is empty
///   - cost is the mean squared distance from each point to its centroid
struct ClusterModel {
    int k = 0;
    std::vector<FeaturePoint> centroids;
    std::vector<int> labels;
    double cost = 0.0;
    double mean_silhouette = 0.0;
    int iterations = 0;

    /// Throws std::logic_error when an invariant fails.
    void verify(std::span<const FeaturePoint> points, double tol = 1e-12) const;
};

int nearest_centroid(const FeaturePoint& p, std::span<const FeaturePoint> centroids);

double clustering_cost(std::span<const FeaturePoint> points,
                       std::span<const FeaturePoint> centroids,
                       std::span<const int> labels);

/// k-means++ seeding: first centre uniform, each further centre drawn with
/// probability proportional to its squared distance from the nearest chosen
/// centre. Throws std::invalid_argument when k exceeds the number of
/// distinct points.
std::vector<FeaturePoint> kmeanspp_init(std::span<const FeaturePoint> points, int k,
                                        std::uint64_t seed);

/// Lloyd iteration from the given centroids. Runs until the assignment
/// reaches a fixed point, at which the centroid movement is exactly 0 (and
/// so below any `tol`); `tol` additionally allows an early stop when a
/// movement below it is followed by an unchanged assignment. Empty clusters
/// are repaired by reseeding on the point farthest from its centroid. The
/// per-iteration cost is verified to be non-increasing; a violation throws
/// std::logic_error.
ClusterModel lloyd(std::span<const FeaturePoint> points, std::vector<FeaturePoint> centroids,
                   int max_iterations = 300, double tol = 1e-9);

/// Mean silhouette over all points, full pairwise-distance form. Points in
/// singleton clusters score 0. Throws std::invalid_argument when fewer than
/// two populated clusters exist ("silhouette undefined for k=1").
double mean_silhouette(std::span<const FeaturePoint> points, std::span<const int> labels);

struct KSelection {
    int k_star = 0;
    std::map<int, double> per_k;  // K -> mean silhouette of the best-cost run
    ClusterModel model;           // the winning model, refit at k_star
    int k_min = 0;
    int k_max = 0;        // after clamping
    bool clamped = false; // true when k_max was reduced to the distinct-point count
};

/// Fits every K in [k_min, k_max] with `restarts` seeded runs each, keeps
/// the lowest-cost run per K, and picks the K with the highest mean
/// silhouette (ties within 1e-12 go to the smaller K). When fewer than
/// k_max distinct points exist, k_max is clamped down to that count; fewer
/// than k_min distinct points is an error (std::invalid_argument).
KSelection select_k(std::span<const FeaturePoint> points, std::uint64_t seed, int k_min = 2,
                    int k_max = 10, int restarts = 10);

/// Baseline: labels drawn uniformly at random, no fitting. Same selection
/// loop shape as select_k, reporting per-K silhouettes of random
/// assignments. Used to sanity-check that real structure scores higher.
KSelection random_baseline(std::span<const FeaturePoint> points, std::uint64_t seed,
                           int k_min = 2, int k_max = 10);

std::size_t count_distinct_points(std::span<const FeaturePoint> points);

}  // namespace qah
