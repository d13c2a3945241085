#pragma once

#include <cstdint>
#include <random>

#include "mobilab/geometry.hpp"

namespace mobilab {

// Seeded random source for one generation or simulation run.
//
// Backed by std::mt19937_64 seeded with the 64-bit seed directly. Draw
// sequences are fixed for a given seed within one build; they are not
// promised to match across standard library implementations because the
// distribution adaptors are implementation-defined.
class RandomStream {
 public:
    explicit RandomStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const { return seed_; }

    // Uniform in [lo, hi); returns lo when lo == hi.
    double uniform(double lo, double hi) {
        if (!(hi > lo)) return lo;
        return std::uniform_real_distribution<double>(lo, hi)(engine_);
    }

    // Uniform integer in [0, n).
    std::uint64_t index(std::uint64_t n) {
        return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_);
    }

    double standard_normal() { return normal_(engine_); }

    // Uniform point in the disc of the given radius centred on the origin.
    Vec2 in_disc(double radius);

    // Uniform point in the area rectangle.
    Vec2 in_area(const Area& area) {
        double x = uniform(0.0, area.width);
        double y = uniform(0.0, area.height);
        return {x, y};
    }

 private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

// SplitMix64 finalizer; a bijection on 64-bit words.
std::uint64_t mix64(std::uint64_t x);

// Sub-stream seed for a named purpose (flows, routing jitter) of one run.
std::uint64_t derive_stream_seed(std::uint64_t run_seed, std::uint64_t purpose);

}  // namespace mobilab
