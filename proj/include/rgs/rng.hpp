#pragma once

#include <cstdint>
#include <random>

namespace rgs {

// All randomness in the library flows through an explicitly passed generator.
// std::random distributions are avoided on purpose: their output is
// implementation-defined, and runs must be byte-reproducible from a seed.
using Rng = std::mt19937_64;

// splitmix64 finalizer, used to derive independent per-task streams.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool bernoulli(Rng& rng, double p) {
    return uniform01(rng) < p;
}

// Uniform integer in [0, n) via the multiply-shift reduction.
inline std::size_t uniform_index(Rng& rng, std::size_t n) {
    return static_cast<std::size_t>(
        (static_cast<unsigned __int128>(rng()) * n) >> 64);
}

} // namespace rgs
