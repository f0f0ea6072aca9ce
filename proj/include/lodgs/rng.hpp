// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>

namespace lodgs {

// Thin wrappers around mt19937_64 that avoid std distributions, whose output
// is implementation-defined. Output here depends on the seed only.
struct Rng {
    std::mt19937_64 gen;

    explicit Rng(std::uint64_t seed) : gen(seed) {}

    std::uint64_t next_u64() { return gen(); }

    // Uniform in [0, 1).
    double next_double() { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // Uniform in [0, n).
    std::uint64_t next_below(std::uint64_t n) { return gen() % n; }
};

// Stable per-item stream derived from a base seed (splitmix64 finalizer).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t item) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (item + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace lodgs
