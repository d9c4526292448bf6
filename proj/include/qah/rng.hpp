#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace qah {

/// SplitMix64 mix step. Used to derive independent child seeds from a base
/// seed plus a stream index, so that adding a consumer never shifts the
/// draws seen by another.
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Uniform double in [0, 1) from the top 53 bits. Spelled out rather than
/// taken from <random> distributions, whose outputs differ across standard
/// library implementations.
inline double canonical_double(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, bound) by rejection; bound must be positive.
inline std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % bound;
    std::uint64_t draw = rng();
    while (draw >= limit) draw = rng();
    return draw % bound;
}

/// Poisson draw via inversion for small means (Knuth's product method).
inline std::uint32_t poisson_draw(std::mt19937_64& rng, double mean) {
    if (mean <= 0.0) return 0;
    double l = 1.0;
    const double floor_l = std::exp(-mean);
    std::uint32_t k = 0;
    do {
        ++k;
        l *= canonical_double(rng);
    } while (l > floor_l);
    return k - 1;
}

}  // namespace qah
