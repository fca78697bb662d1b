#pragma once

#include <cstdint>

namespace mckv {

/// Integer mix used for seeding and counter-based noise.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

/// Uniform in (0, 1] from 53 high bits.
inline double uniform_from_bits(std::uint64_t u) {
    return (static_cast<double>(u >> 11) + 1.0) * 0x1.0p-53;
}

/// Two independent standard normals from a single 64-bit key (Box-Muller).
struct GaussPair {
    double first, second;
};
GaussPair gauss_pair(std::uint64_t key);

/// Canonical splitmix64 stream; cheap to seed, suitable as a counter-based
/// substream (one instance per particle per step).
struct SplitMix64 {
    std::uint64_t state;
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    double uniform() { return uniform_from_bits(next()); }
};

/// Standard normal via the 128-layer ziggurat; consumes a variable number of
/// draws from the stream.
double ziggurat_normal(SplitMix64& rng);

}  // namespace mckv
