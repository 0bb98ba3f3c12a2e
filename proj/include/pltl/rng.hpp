#pragma once
// Deterministic, stream-splittable random number generation.
//
// All stochastic components of the toolkit draw from SplitMix64 streams so
// that a (seed, stream) pair fully determines every sample, independent of
// platform, standard library, or thread scheduling.

#include <cstdint>

namespace pltl {

struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed) {}

    // Derive an independent stream, e.g. one per episode.
    static Rng stream(std::uint64_t seed, std::uint64_t index) {
        Rng mix(seed ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
        mix.next();
        mix.next();
        return mix;
    }

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform double in [0,1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        // Rejection-free is unnecessary here; modulo bias is < 2^-40 for the
        // small n used in this codebase, but we reject anyway for exactness.
        std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            std::uint64_t r = next();
            if (r >= threshold) return r % n;
        }
    }
};

}  // namespace pltl
