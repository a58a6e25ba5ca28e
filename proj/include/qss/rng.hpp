#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace qss {

// Seeded 64-bit generator. Draws are built from raw engine output rather than
// <random> distributions so a seed reproduces the same stream on every
// standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform in [0, bound), by rejection.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t r;
        do {
            r = engine_();
        } while (r >= limit);
        return r % bound;
    }

    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Standard normal via Box-Muller.
    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::mt19937_64 engine_;
};

// Seed for an independent per-round stream: seed XOR index.
inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) { return seed ^ index; }

} // namespace qss
