#pragma once

#include <cstdint>
#include <random>

#include "noma/linalg.hpp"

namespace noma {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

/// Deterministic substream for (seed, index). Results are independent of how
/// work is partitioned across threads.
inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t index) {
    return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(index + 0x51ed2701ull)));
}

/// Circularly symmetric complex Gaussian CN(0, 1).
inline Complex standard_complex_gaussian(std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, std::sqrt(0.5));
    const double re = n(rng);
    const double im = n(rng);
    return Complex(re, im);
}

}  // namespace noma
