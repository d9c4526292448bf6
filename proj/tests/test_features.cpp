#include "qah/features.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

#include "doctest.h"

using namespace qah;

namespace {

using Series = std::vector<std::uint32_t>;

// Independent brute-force re-implementations, kept deliberately naive.
std::vector<std::size_t> peaks_oracle(const Series& s) {
    std::vector<std::size_t> out;
    for (std::size_t t = 0; t < s.size(); ++t) {
        const std::uint32_t left = t > 0 ? s[t - 1] : 0;
        const std::uint32_t right = t + 1 < s.size() ? s[t + 1] : 0;
        if (s[t] > left && s[t] > right) out.push_back(t);
    }
    return out;
}

double ratio_oracle(const Series& s) {
    if (s.empty()) return 0.0;
    std::set<std::uint32_t> values;
    for (std::uint32_t v : s) {
        if (v > 0) values.insert(v);
    }
    return static_cast<double>(values.size()) / static_cast<double>(s.size());
}

bool duplicate_max_oracle(const Series& s) {
    const auto peaks = peaks_oracle(s);
    if (peaks.size() < 2) return false;
    std::uint32_t best = 0;
    for (std::size_t t : peaks) best = std::max(best, s[t]);
    std::size_t hits = 0;
    for (std::size_t t : peaks) {
        if (s[t] == best) ++hits;
    }
    return hits >= 2;
}

}  // namespace

TEST_CASE("detect_peaks worked examples") {
    CHECK(detect_peaks(Series{1, 2, 1}) == std::vector<std::size_t>{1});
    CHECK(detect_peaks(Series{0, 0, 0}).empty());
    CHECK(detect_peaks(Series{3}) == std::vector<std::size_t>{0});  // implicit zero padding
    CHECK(detect_peaks(Series{0, 2, 0, 2, 0, 5, 0}) == std::vector<std::size_t>{1, 3, 5});
    // Plateaus are not peaks: strict inequality on both sides.
    CHECK(detect_peaks(Series{0, 3, 3, 0}).empty());
    // Edge bursts count thanks to the implicit zeros.
    CHECK(detect_peaks(Series{4, 0, 0}) == std::vector<std::size_t>{0});
    CHECK(detect_peaks(Series{0, 0, 4}) == std::vector<std::size_t>{2});
}

TEST_CASE("many_peaks is strictly more than the threshold") {
    // Six isolated spikes → more than 5 peaks.
    const Series six{1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1};
    CHECK(detect_peaks(six).size() == 6);
    CHECK(many_peaks(six));
    // Exactly five peaks is not "many".
    const Series five{1, 0, 1, 0, 1, 0, 1, 0, 1};
    CHECK(detect_peaks(five).size() == 5);
    CHECK_FALSE(many_peaks(five));
    CHECK_FALSE(many_peaks(Series{0, 0, 0}));
    // The threshold is a parameter.
    CHECK(many_peaks(five, 4));
    CHECK_FALSE(many_peaks(five, 5));
}

TEST_CASE("duplicate_max worked examples") {
    CHECK(duplicate_max(Series{0, 3, 0, 3, 0}));
    CHECK_FALSE(duplicate_max(Series{0, 3, 0, 2, 0}));
    CHECK_FALSE(duplicate_max(Series{0, 4, 0}));  // a single peak cannot duplicate
    CHECK_FALSE(duplicate_max(Series{}));
    // Only peak heights participate: the 9 here is not a peak (plateau).
    CHECK(duplicate_max(Series{5, 0, 9, 9, 0, 5, 0}));
}

TEST_CASE("unique_nonzero_ratio worked examples") {
    CHECK(unique_nonzero_ratio(Series{0, 2, 0, 2, 3}) == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(unique_nonzero_ratio(Series(10, 0)) == 0.0);
    CHECK(unique_nonzero_ratio(Series{1, 2, 3, 4}) == 1.0);
    CHECK(unique_nonzero_ratio(Series{}) == 0.0);
}

TEST_CASE("extract_features worked examples") {
    // A single question ever: the NonRecurring shape.
    Series lone(60, 0);
    lone[7] = 1;
    const FeatureVector nr = extract_features(lone);
    CHECK(nr.many_peaks == 0.0);
    CHECK(nr.duplicate_max == 0.0);
    CHECK(nr.unique_nonzero_ratio == doctest::Approx(1.0 / 60.0).epsilon(1e-12));

    // Six equal spikes over 13 months: many peaks of duplicated height.
    const Series spikes{0, 3, 0, 3, 0, 3, 0, 3, 0, 3, 0, 3, 0};
    const FeatureVector sp = extract_features(spikes);
    CHECK(sp.many_peaks == 1.0);
    CHECK(sp.duplicate_max == 1.0);
    CHECK(sp.unique_nonzero_ratio == doctest::Approx(1.0 / 13.0).epsilon(1e-12));

    // A smooth ramp up and down: one peak, no duplicates, and the ratio
    // counts the seven distinct values {4,5,6,7,8,9,10} over 12 months.
    const Series ramp{5, 6, 7, 8, 9, 10, 9, 8, 7, 6, 5, 4};
    const FeatureVector rv = extract_features(ramp);
    CHECK(detect_peaks(ramp).size() == 1);
    CHECK(rv.many_peaks == 0.0);
    CHECK(rv.duplicate_max == 0.0);
    CHECK(rv.unique_nonzero_ratio == doctest::Approx(7.0 / 12.0).epsilon(1e-12));
}

TEST_CASE("feature vector components stay in the unit cube") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        Series s(1 + rng() % 40);
        for (auto& v : s) v = rng() % 6;
        const FeatureVector fv = extract_features(s);
        CHECK(fv.many_peaks * (fv.many_peaks - 1.0) == 0.0);
        CHECK(fv.duplicate_max * (fv.duplicate_max - 1.0) == 0.0);
        CHECK(fv.unique_nonzero_ratio >= 0.0);
        CHECK(fv.unique_nonzero_ratio <= 1.0);
    }
}

TEST_CASE("all features agree with brute-force oracles on random series") {
    std::mt19937 rng(1234);
    for (int trial = 0; trial < 1000; ++trial) {
        Series s(1 + rng() % 80);
        for (auto& v : s) v = rng() % 51;
        CHECK(detect_peaks(s) == peaks_oracle(s));
        CHECK(many_peaks(s) == (peaks_oracle(s).size() > 5));
        CHECK(duplicate_max(s) == duplicate_max_oracle(s));
        CHECK(unique_nonzero_ratio(s) == ratio_oracle(s));
    }
}

TEST_CASE("reversal leaves all three features unchanged") {
    std::mt19937 rng(77);
    for (int trial = 0; trial < 300; ++trial) {
        Series s(1 + rng() % 50);
        for (auto& v : s) v = rng() % 8;
        Series r(s.rbegin(), s.rend());
        const FeatureVector a = extract_features(s);
        const FeatureVector b = extract_features(r);
        CHECK(a == b);
    }
}

TEST_CASE("peak soundness: every reported peak is positive") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        Series s(1 + rng() % 30);
        for (auto& v : s) v = rng() % 4;
        for (std::size_t t : detect_peaks(s)) CHECK(s[t] > 0);
    }
}

TEST_CASE("nearest_rank_quantile") {
    // Nearest-rank: rank = ceil(q * n), 1-based.
    std::vector<std::size_t> uniform(100);
    for (std::size_t i = 0; i < 100; ++i) uniform[i] = i + 1;
    CHECK(nearest_rank_quantile(uniform, 0.9) == 90);
    CHECK(nearest_rank_quantile(uniform, 1.0) == 100);
    CHECK(nearest_rank_quantile(uniform, 0.01) == 1);

    CHECK(nearest_rank_quantile({2, 2, 2, 2}, 0.9) == 2);

    // Nine zeros and one five: rank ceil(0.9 * 10) = 9 lands on the last
    // zero, not the outlier. The outlier needs the full quantile.
    std::vector<std::size_t> skewed(10, 0);
    skewed[9] = 5;
    CHECK(nearest_rank_quantile(skewed, 0.9) == 0);
    CHECK(nearest_rank_quantile(skewed, 1.0) == 5);

    CHECK_THROWS_AS(nearest_rank_quantile({}, 0.9), std::invalid_argument);
    CHECK_THROWS_AS(nearest_rank_quantile({1}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(nearest_rank_quantile({1}, 1.5), std::invalid_argument);
}

TEST_CASE("peak_count_quantile over a corpus") {
    std::vector<std::vector<std::uint32_t>> corpus;
    // Ten series with peak counts 1..10: k isolated spikes each.
    for (int k = 1; k <= 10; ++k) {
        Series s;
        for (int i = 0; i < k; ++i) {
            s.push_back(1);
            s.push_back(0);
        }
        corpus.push_back(s);
    }
    CHECK(peak_count_quantile(corpus, 0.9) == 9);
    CHECK(peak_count_quantile(corpus) == 9);
    CHECK(peak_count_quantile(corpus, 1.0) == 10);
    CHECK_THROWS_AS(peak_count_quantile({}, 0.9), std::invalid_argument);
}
