#include "mobilab/random.hpp"

#include <cmath>
#include <numbers>

namespace mobilab {

Vec2 RandomStream::in_disc(double radius) {
    if (radius <= 0.0) return {};
    double r = radius * std::sqrt(uniform(0.0, 1.0));
    double theta = uniform(0.0, 2.0 * std::numbers::pi);
    return {r * std::cos(theta), r * std::sin(theta)};
}

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_stream_seed(std::uint64_t run_seed, std::uint64_t purpose) {
    return mix64(mix64(run_seed) + purpose);
}

}  // namespace mobilab
