#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace sqm {

/// All seeded generation uses 64-bit Mersenne Twister (std::mt19937_64, fully specified by
/// the standard) with the rejection sampler below, so streams are identical across
/// platforms and standard libraries.
using Rng = std::mt19937_64;

/// Uniform integer in [0, bound).
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t bound) {
    if (bound <= 1) return 0;
    const std::uint64_t limit = std::uint64_t(-1) - (std::uint64_t(-1) % bound);
    while (true) {
        const std::uint64_t x = rng();
        if (x < limit) return x % bound;
    }
}

/// Uniform integer in [lo, hi].
inline std::int64_t uniform_int(Rng& rng, std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(uniform_index(rng, static_cast<std::uint64_t>(hi - lo) + 1));
}

template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[uniform_index(rng, i)]);
}

}  // namespace sqm
