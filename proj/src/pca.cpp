#include "qah/pca.hpp"

#include <cmath>
#include <stdexcept>

namespace qah {
namespace {

constexpr int kMaxSweeps = 64;
constexpr double kOffDiagonalTol = 1e-14;

double off_diagonal_norm(const std::array<std::array<double, 3>, 3>& m) {
    return std::abs(m[0][1]) + std::abs(m[0][2]) + std::abs(m[1][2]);
}

}  // namespace

SymmetricEigen jacobi_eigen(const std::array<std::array<double, 3>, 3>& matrix) {
    std::array<std::array<double, 3>, 3> a = matrix;
    // v accumulates the rotations; starts as identity.
    std::array<std::array<double, 3>, 3> v{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};

    for (int sweep = 0; sweep < kMaxSweeps && off_diagonal_norm(a) > kOffDiagonalTol; ++sweep) {
        for (int p = 0; p < 2; ++p) {
            for (int q = p + 1; q < 3; ++q) {
                if (std::abs(a[p][q]) <= kOffDiagonalTol) continue;
                // Classic Jacobi rotation zeroing a[p][q].
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (int i = 0; i < 3; ++i) {
                    const double aip = a[i][p];
                    const double aiq = a[i][q];
                    a[i][p] = c * aip - s * aiq;
                    a[i][q] = s * aip + c * aiq;
                }
                for (int i = 0; i < 3; ++i) {
                    const double api = a[p][i];
                    const double aqi = a[q][i];
                    a[p][i] = c * api - s * aqi;
                    a[q][i] = s * api + c * aqi;
                }
                for (int i = 0; i < 3; ++i) {
                    const double vip = v[i][p];
                    const double viq = v[i][q];
                    v[i][p] = c * vip - s * viq;
                    v[i][q] = s * vip + c * viq;
                }
            }
        }
    }

    SymmetricEigen eigen;
    std::array<int, 3> order{0, 1, 2};
    // Descending eigenvalue order; stable for ties.
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
            if (a[order[j]][order[j]] > a[order[i]][order[i]]) std::swap(order[i], order[j]);
        }
    }
    for (int i = 0; i < 3; ++i) {
        const int src = order[i];
        eigen.values[static_cast<std::size_t>(i)] = a[src][src];
        for (int r = 0; r < 3; ++r) {
            eigen.vectors[static_cast<std::size_t>(i)][static_cast<std::size_t>(r)] = v[r][src];
        }
    }
    return eigen;
}

PcaProjection pca_project(std::span<const FeaturePoint> points) {
    if (points.empty()) throw std::invalid_argument("cannot project zero points");
    const auto n = static_cast<double>(points.size());

    FeaturePoint mean{0, 0, 0};
    for (const FeaturePoint& p : points) {
        for (std::size_t d = 0; d < 3; ++d) mean[d] += p[d];
    }
    for (double& coord : mean) coord /= n;

    // Covariance (population form; the scale does not affect directions or
    // explained fractions).
    std::array<std::array<double, 3>, 3> cov{};
    for (const FeaturePoint& p : points) {
        for (std::size_t r = 0; r < 3; ++r) {
            for (std::size_t c = r; c < 3; ++c) {
                cov[r][c] += (p[r] - mean[r]) * (p[c] - mean[c]);
            }
        }
    }
    for (std::size_t r = 0; r < 3; ++r) {
        for (std::size_t c = r; c < 3; ++c) {
            cov[r][c] /= n;
            cov[c][r] = cov[r][c];
        }
    }

    PcaProjection out;
    const double total_variance = cov[0][0] + cov[1][1] + cov[2][2];
    if (total_variance <= 0.0) {
        out.degenerate = true;
        out.coordinates.assign(points.size(), {0.0, 0.0});
        out.components = {FeaturePoint{1, 0, 0}, FeaturePoint{0, 1, 0}};
        out.explained = {0.0, 0.0};
        return out;
    }

    const SymmetricEigen eigen = jacobi_eigen(cov);
    for (std::size_t comp = 0; comp < 2; ++comp) {
        FeaturePoint axis = eigen.vectors[comp];
        // Sign convention: the largest-magnitude coordinate is positive.
        std::size_t arg = 0;
        for (std::size_t d = 1; d < 3; ++d) {
            if (std::abs(axis[d]) > std::abs(axis[arg])) arg = d;
        }
        if (axis[arg] < 0.0) {
            for (double& coord : axis) coord = -coord;
        }
        out.components[comp] = axis;
        // Tiny negative eigenvalues are rounding noise; clamp.
        out.explained[comp] = std::max(0.0, eigen.values[comp]) / total_variance;
    }

    out.coordinates.reserve(points.size());
    for (const FeaturePoint& p : points) {
        std::array<double, 2> coord{0.0, 0.0};
        for (std::size_t comp = 0; comp < 2; ++comp) {
            for (std::size_t d = 0; d < 3; ++d) {
                coord[comp] += (p[d] - mean[d]) * out.components[comp][d];
            }
        }
        out.coordinates.push_back(coord);
    }
    return out;
}

}  // namespace qah
