#include "qah/features.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qah {
namespace {

std::uint32_t at_or_zero(std::span<const std::uint32_t> series, std::size_t index) {
    return index < series.size() ? series[index] : 0;
}

}  // namespace

std::vector<std::size_t> detect_peaks(std::span<const std::uint32_t> series) {
    std::vector<std::size_t> peaks;
    for (std::size_t t = 0; t < series.size(); ++t) {
        const std::uint32_t left = t == 0 ? 0 : series[t - 1];
        const std::uint32_t right = at_or_zero(series, t + 1);
        if (series[t] > left && series[t] > right) peaks.push_back(t);
    }
    return peaks;
}

bool many_peaks(std::span<const std::uint32_t> series, int threshold) {
    return detect_peaks(series).size() > static_cast<std::size_t>(threshold);
}

bool duplicate_max(std::span<const std::uint32_t> series) {
    const std::vector<std::size_t> peaks = detect_peaks(series);
    if (peaks.size() < 2) return false;
    std::uint32_t max_height = 0;
    for (std::size_t t : peaks) max_height = std::max(max_height, series[t]);
    std::size_t at_max = 0;
    for (std::size_t t : peaks) {
        if (series[t] == max_height) ++at_max;
    }
    return at_max >= 2;
}

double unique_nonzero_ratio(std::span<const std::uint32_t> series) {
    if (series.empty()) return 0.0;
    std::vector<std::uint32_t> nonzero;
    nonzero.reserve(series.size());
    for (std::uint32_t v : series) {
        if (v != 0) nonzero.push_back(v);
    }
    std::sort(nonzero.begin(), nonzero.end());
    nonzero.erase(std::unique(nonzero.begin(), nonzero.end()), nonzero.end());
    return static_cast<double>(nonzero.size()) / static_cast<double>(series.size());
}

FeatureVector extract_features(std::span<const std::uint32_t> series, int peak_threshold) {
    FeatureVector fv;
    fv.many_peaks = many_peaks(series, peak_threshold) ? 1.0 : 0.0;
    fv.duplicate_max = duplicate_max(series) ? 1.0 : 0.0;
    fv.unique_nonzero_ratio = unique_nonzero_ratio(series);
    return fv;
}

std::size_t nearest_rank_quantile(std::vector<std::size_t> values, double q) {
    if (values.empty()) throw std::invalid_argument("quantile of an empty sample");
    if (!(q > 0.0) || q > 1.0) throw std::invalid_argument("quantile level must lie in (0, 1]");
    std::sort(values.begin(), values.end());
    const auto n = static_cast<double>(values.size());
    auto rank = static_cast<std::size_t>(std::ceil(q * n));
    if (rank == 0) rank = 1;
    return values[rank - 1];
}

std::size_t peak_count_quantile(std::span<const std::vector<std::uint32_t>> all_series, double q) {
    std::vector<std::size_t> counts;
    counts.reserve(all_series.size());
    for (const auto& series : all_series) counts.push_back(detect_peaks(series).size());
    return nearest_rank_quantile(std::move(counts), q);
}

}  // namespace qah
