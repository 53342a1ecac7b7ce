#pragma once

// Splittable counter-style RNG: every (seed, stream) pair yields an
// independent, reproducible substream. Normal variates go through the
// inverse CDF so the stream is fully determined by the generator.

#include <cstdint>

#include "holderim/gauss.hpp"

namespace holderim {

struct SplitMix64 {
    std::uint64_t state = 0;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform on the open interval (0,1).
    double uniform() {
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }

    double normal() { return gauss::phi_inv(uniform()); }
};

/// Derive the substream seed for (seed, stream); streams never collide for
/// distinct stream indices under the same seed.
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream) {
    SplitMix64 g(seed ^ (stream * 0xD1B54A32D192ED03ull + 0x8CB92BA72F3D8DD7ull));
    return g.next();
}

} // namespace holderim
