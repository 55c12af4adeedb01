#pragma once

#include <cstdint>
#include <stdexcept>

namespace rspan {

/// Raised when a request would exceed a hard resource limit (e.g. a Poisson
/// draw whose mean is beyond 2^31). Mapped to exit code 3 by the CLI.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// SplitMix64 finalizer (Stafford mix13 as used by splitmix64). A bijection
/// on 64-bit words.
inline uint64_t mix64(uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed for replicate `index` of a run with the given master seed:
///
///     mix64(master_seed + 0x9e3779b97f4a7c15 * (index + 1))
///
/// The additive step is injective in `index` modulo 2^64 (the multiplier is
/// odd) and mix64 is a bijection, so replicate seeds never collide within a
/// run. This mixing function is part of the reproducibility contract.
inline uint64_t derive_replicate_seed(uint64_t master_seed, uint64_t index) {
    return mix64(master_seed + 0x9e3779b97f4a7c15ULL * (index + 1));
}

/// Independent named substreams of one master seed (used when an estimator
/// needs several unrelated replicate families).
inline uint64_t derive_stream_seed(uint64_t master_seed, uint64_t stream) {
    return mix64(master_seed ^ (0xd1b54a32d192ed03ULL + stream * 0x8cb92ba72f3d8dd7ULL));
}

/// xoshiro256++ seeded through SplitMix64. The single generator used
/// everywhere in this repository; all randomness is a pure function of the
/// 64-bit seed.
class Rng {
public:
    explicit Rng(uint64_t seed) {
        // SplitMix64 state expansion, the seeding recommended for xoshiro.
        uint64_t sm = seed;
        for (auto& w : s_) {
            sm += 0x9e3779b97f4a7c15ULL;
            uint64_t z = sm;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            w = z ^ (z >> 31);
        }
    }

    uint64_t next_u64() {
        const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1), 53 random bits.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in (0, 1]; safe as a log() argument.
    double next_unit_open() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * next_unit(); }

    /// Poisson(mean) by counting unit-rate exponential arrivals in [0, mean].
    /// Exact for every mean; O(mean) uniforms per draw. Means above 2^31 are
    /// rejected with a ResourceError.
    uint64_t poisson(double mean);

    /// Standard normal via Box-Muller (one value per call, no caching, so the
    /// stream position is a pure function of the call count).
    double normal();

private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    uint64_t s_[4];
};

} // namespace rspan
