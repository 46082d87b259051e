#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace misnet {

using Rng = std::mt19937_64;

/// FNV-1a, 64 bit. Stable across platforms and runs, unlike std::hash.
constexpr std::uint64_t stable_hash(std::string_view text) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) noexcept {
    return splitmix64(a ^ splitmix64(b + 0x632be59bd9b4e019ULL));
}

/// Seed of a named substream of `master`. Streams with different names are
/// independent, so adding a consumer never shifts another consumer's draws.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::string_view stream) noexcept {
    return mix_seed(master, stable_hash(stream));
}

/// Uniform integer in [0, bound). Rejection sampling on raw engine output so
/// the sequence does not depend on the standard library's distributions.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
    if (bound <= 1) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % bound;
}

inline bool fair_coin(Rng& rng) { return (rng() >> 63) != 0; }

}  // namespace misnet
