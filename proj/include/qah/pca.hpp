#pragma once

#include <array>
#include <span>
#include <vector>

#include "qah/kmeans.hpp"

namespace qah {

/// 2-D principal-component projection of the 3-D feature cloud, used for
/// scatter inspection. Components are unit-length rows of the rotation,
/// ordered by descending eigenvalue; each component's sign is fixed so its
/// largest-magnitude coordinate is positive.
struct PcaProjection {
    std::vector<std::array<double, 2>> coordinates;  // one row per input point
    std::array<FeaturePoint, 2> components{};
    std::array<double, 2> explained{};  // fraction of total variance, each in [0, 1]
    bool degenerate = false;            // all points identical: zero variance
};

PcaProjection pca_project(std::span<const FeaturePoint> points);

/// Eigen-decomposition of a symmetric 3x3 matrix by the cyclic Jacobi
/// method. Returns eigenvalues in descending order with matching unit
/// eigenvectors (columns).
struct SymmetricEigen {
    std::array<double, 3> values{};
    std::array<FeaturePoint, 3> vectors{};  // vectors[i] pairs with values[i]
};

SymmetricEigen jacobi_eigen(const std::array<std::array<double, 3>, 3>& matrix);

}  // namespace qah
