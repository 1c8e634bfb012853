#pragma once

#include <cstdint>
#include <random>

namespace adscreen {

using Rng = std::mt19937_64;

// SplitMix64 finalizer. Used to derive independent substreams from a master
// seed so results do not depend on scheduling order.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                    std::uint64_t salt = 0) noexcept {
    return mix64(mix64(master ^ mix64(salt)) + mix64(stream + 1));
}

inline Rng make_rng(std::uint64_t master, std::uint64_t stream, std::uint64_t salt = 0) {
    return Rng(derive_seed(master, stream, salt));
}

inline double uniform01(Rng& rng) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

inline bool bernoulli(Rng& rng, double p) { return uniform01(rng) < p; }

} // namespace adscreen
