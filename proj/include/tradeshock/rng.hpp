#ifndef TRADESHOCK_RNG_HPP
#define TRADESHOCK_RNG_HPP

#include <cstdint>
#include <random>
#include <span>

namespace tradeshock {

// Seed derivation and shuffling are pinned here rather than delegated to
// std::shuffle / std::uniform_int_distribution, whose outputs are
// implementation-defined. Reproducibility across platforms and thread
// schedules relies on mt19937_64 (fully specified by the standard) plus the
// explicit routines below.

/// splitmix64-style mix of (base, index). Trial t of a seeded experiment uses
/// derive_seed(seed, t); per-year sweeps use derive_seed(seed, year) as base.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Unbiased uniform draw from [0, bound) via rejection sampling. bound > 0.
inline std::uint64_t uniform_below(std::mt19937_64& gen, std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound; // 2^64 mod bound
    for (;;) {
        const std::uint64_t r = gen();
        if (r >= threshold) return r % bound;
    }
}

/// Fisher-Yates shuffle with the engine above; uniform over permutations.
template <typename T>
void shuffle_span(std::span<T> items, std::mt19937_64& gen) {
    for (std::size_t i = items.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(uniform_below(gen, i));
        std::swap(items[i - 1], items[j]);
    }
}

} // namespace tradeshock

#endif
