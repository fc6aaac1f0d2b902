#pragma once

#include <cstdint>

// Counter-based seedable generator. Streams derived from (seed, index) are
// independent, so per-question or per-resample work can run in any order
// without changing results.

namespace ri::rng {

struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform on the open interval (0,1); never returns an endpoint, so it
    // is safe to feed through the normal quantile.
    double uniform01() {
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return next() % n; }
};

// Decorrelated stream for (seed, index).
inline SplitMix64 stream(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 mixer(seed ^ (0x9E3779B97F4A7C15ULL * (index + 1)));
    SplitMix64 out(mixer.next());
    return out;
}

}  // namespace ri::rng
