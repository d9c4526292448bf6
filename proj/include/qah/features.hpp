#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace qah {

inline constexpr int kDefaultPeakThreshold = 5;

/// The three per-series shape features. Every component lies in [0, 1];
/// the first two are Boolean indicators stored as 0.0 / 1.0.
struct FeatureVector {
    double many_peaks = 0.0;
    double duplicate_max = 0.0;
    double unique_nonzero_ratio = 0.0;

    std::array<double, 3> as_point() const {
        return {many_peaks, duplicate_max, unique_nonzero_ratio};
    }

    friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

/// Indices t where series[t] is strictly greater than both neighbors,
/// reading an implicit zero beyond each end. A single-month series with a
/// positive value is one peak.
std::vector<std::size_t> detect_peaks(std::span<const std::uint32_t> series);

/// True when the series has strictly more than `threshold` peaks.
bool many_peaks(std::span<const std::uint32_t> series, int threshold = kDefaultPeakThreshold);

/// True when at least two peaks attain the maximum peak height.
bool duplicate_max(std::span<const std::uint32_t> series);

/// Distinct nonzero values divided by series length; 0 for an empty series.
double unique_nonzero_ratio(std::span<const std::uint32_t> series);

FeatureVector extract_features(std::span<const std::uint32_t> series,
                               int peak_threshold = kDefaultPeakThreshold);

/// Nearest-rank quantile (1-based rank ceil(q * n)) of a value sample.
/// Used to suggest a data-driven peak threshold: the q-quantile of per-user
/// peak counts. Throws std::invalid_argument on an empty sample or q
/// outside (0, 1].
std::size_t nearest_rank_quantile(std::vector<std::size_t> values, double q);

/// The q-quantile of peak counts across the given series.
std::size_t peak_count_quantile(std::span<const std::vector<std::uint32_t>> all_series, double q = 0.9);

}  // namespace qah
