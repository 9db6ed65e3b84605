#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

namespace dominative {

// Counter-based splittable randomness.  Every consumer derives its stream
// key from (seed, trace index, step index, salt) and draws by advancing a
// splitmix64 state, so traces are reproducible bit-for-bit and independent
// of scheduling.

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t mix_key(std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = a;
    std::uint64_t h = splitmix64(s);
    s = h ^ b;
    return splitmix64(s);
}

inline std::uint64_t stream_key(std::uint64_t seed, std::uint64_t trace,
                                std::uint64_t step, std::uint64_t salt = 0) {
    return mix_key(mix_key(mix_key(seed, trace), step), salt);
}

class Rng {
public:
    explicit Rng(std::uint64_t key) : state_(key) {}

    std::uint64_t next_u64() { return splitmix64(state_); }

    // Uniform in [0, 1) with 53 significant bits.
    double u01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Box-Muller pair; always consumes exactly two uniforms.
    std::pair<double, double> gauss2() {
        const double u1 = 1.0 - u01(); // (0, 1]
        const double u2 = u01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double th = 2.0 * std::numbers::pi * u2;
        return {r * std::cos(th), r * std::sin(th)};
    }

private:
    std::uint64_t state_;
};

} // namespace dominative
