#pragma once

#include <cstdint>
#include <random>

namespace cspin {

// SplitMix64 step; used both as a standalone mixer and to derive per-point
// seeds from a master seed. Derived seed for grid point i is
// splitmix64(master + (i+1) * 0x9e3779b97f4a7c15).
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(master + (index + 1) * 0x9e3779b97f4a7c15ULL);
}

// All stochastic state preparation uses std::mt19937_64 seeded with a 64-bit
// seed. Reproducible across runs of the same binary; the generator name and
// seeds are recorded in output manifests.
using Rng = std::mt19937_64;

}  // namespace cspin
