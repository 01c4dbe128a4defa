#ifndef REGFORGE_RNG_HPP
#define REGFORGE_RNG_HPP

#include <algorithm>
#include <cstdint>
#include <string_view>
#include <vector>

namespace regforge {

/// Identifier of the RNG scheme recorded in reports. All randomness in this
/// project flows through SplitMix64 plus the hand-rolled shuffles below, so
/// byte-identical output is guaranteed across platforms and thread counts.
inline constexpr const char* kRngScheme = "splitmix64/fy-v1";

inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

struct SplitMix64 {
    std::uint64_t state = 0;

    explicit SplitMix64(std::uint64_t seed = 0) : state(seed) {}

    std::uint64_t next() {
        state += 0x9E3779B97F4A7C15ull;
        return mix64(state);
    }

    /// Uniform draw in [0, bound) by rejection; bound >= 1.
    std::uint64_t bounded(std::uint64_t bound) {
        // reject the tail so every residue is equally likely
        std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t x;
        do { x = next(); } while (x >= limit);
        return x % bound;
    }
};

/// Stable substream derivation: one root seed fans out into independent
/// streams keyed by a domain tag and an index. Changing any input changes
/// the stream.
inline std::uint64_t derive_seed(std::uint64_t root, std::string_view domain, std::uint64_t index) {
    std::uint64_t h = 1469598103934665603ull; // FNV-1a over the tag
    for (char c : domain) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    return mix64(mix64(root + 0x9E3779B97F4A7C15ull * h) + 0x9E3779B97F4A7C15ull * (index + 1));
}

/// Fisher-Yates shuffle of values[0..n). Used instead of std::shuffle, whose
/// output is implementation-defined.
template <typename T>
void fy_shuffle(std::vector<T>& values, SplitMix64& rng) {
    for (std::size_t i = values.size(); i > 1; --i) {
        std::size_t j = std::size_t(rng.bounded(i));
        std::swap(values[i - 1], values[j]);
    }
}

/// Draws a uniform k-subset of [0, n) via a partial Fisher-Yates pass and
/// returns it sorted ascending.
inline std::vector<std::int32_t> sample_sorted_subset(SplitMix64& rng, std::int64_t n, std::int64_t k) {
    std::vector<std::int32_t> pool(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) pool[std::size_t(i)] = std::int32_t(i);
    for (std::int64_t i = 0; i < k; ++i) {
        std::int64_t j = i + std::int64_t(rng.bounded(std::uint64_t(n - i)));
        std::swap(pool[std::size_t(i)], pool[std::size_t(j)]);
    }
    pool.resize(std::size_t(k));
    std::sort(pool.begin(), pool.end());
    return pool;
}

} // namespace regforge

#endif
