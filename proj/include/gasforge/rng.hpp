#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace gasforge {

// Every chain owns one of these; all randomness flows through the helpers
// below so the per-step draw order is well defined (one dN Gaussian block per
// refresh, consumed in coordinate order, then one uniform for the Metropolis
// decision).
using Rng = std::mt19937_64;

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
}  // namespace detail

// Per-chain seed derived from a master seed; chain index i gets an
// independent stream regardless of scheduling.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return detail::splitmix64(master ^ detail::splitmix64(index + 1));
}

inline void fill_gaussian(Rng& rng, std::span<double> out) {
    std::normal_distribution<double> normal;
    for (double& v : out) v = normal(rng);
}

inline double uniform01(Rng& rng) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

}  // namespace gasforge
