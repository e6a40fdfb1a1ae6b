#pragma once
#include <cstdint>
#include <initializer_list>
#include <random>

namespace dq {

// 64-bit finalizer, used both as a mixing step and as a seed hash.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Deterministic seed derivation: absorb each component into the state.
inline std::uint64_t derive_seed(std::uint64_t master,
                                 std::initializer_list<std::uint64_t> parts) {
    std::uint64_t h = splitmix64(master);
    for (std::uint64_t p : parts) h = splitmix64(h ^ p);
    return h;
}

// Purpose tags keep independently derived seed streams from colliding.
namespace seed_purpose {
inline constexpr std::uint64_t split = 0x53504c49ULL;
inline constexpr std::uint64_t inject = 0x494e4a45ULL;
inline constexpr std::uint64_t model = 0x4d4f444cULL;
inline constexpr std::uint64_t cell = 0x43454c4cULL;
inline constexpr std::uint64_t probe = 0x50524f42ULL;
} // namespace seed_purpose

// mt19937_64 has a fully specified output sequence, so everything below is
// bit-reproducible across platforms as long as we stay away from
// std::uniform_*_distribution (whose algorithms are implementation-defined).
using rng64 = std::mt19937_64;

inline std::uint64_t uniform_below(rng64& rng, std::uint64_t n) {
    return rng() % n; // bias < n / 2^64, irrelevant at our population sizes
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(rng64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_range(rng64& rng, double lo, double hi) {
    return lo + uniform_unit(rng) * (hi - lo);
}

} // namespace dq
