#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace sunlink {

// Deterministic random stream (splitmix64). The simulator avoids <random>
// engines so that results are bit-stable across standard library versions.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in (0, 1].
    double next_unit_open() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    // One standard normal variate (Box-Muller, second branch discarded).
    double next_normal() {
        const double u1 = next_unit_open();
        const double u2 = next_unit();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::uint64_t state_;
};

// Stream for one packet. Outcomes depend on (seed, packet index) only, never
// on step size or on the order sweep points are evaluated in.
inline RandomStream packet_stream(std::uint64_t seed, std::uint64_t packet_index) {
    return RandomStream(seed + 0x9E3779B97F4A7C15ULL * (packet_index + 1));
}

}  // namespace sunlink
