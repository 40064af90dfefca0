#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace pcmrbm {

// splitmix64 step; derives independent stream seeds from a master seed.
// Keep this stable: experiment reproducibility depends on it.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Seeded random stream. All stochastic code takes one of these explicitly;
// there is no global RNG state anywhere in the library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // uniform in [0,1), 53-bit resolution
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    // standard normal, Box-Muller without a cached spare so every call
    // consumes exactly two uniforms
    double normal() {
        const double u1 = 1.0 - uniform(); // (0,1], keeps log finite
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
    }

    bool bernoulli(double p) { return uniform() < p; }

    // uniform integer in [0,n), rejection sampling (no modulo bias)
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = gen_();
        } while (x >= limit);
        return x % n;
    }

private:
    static constexpr double kTwoPi = 6.28318530717958647692;
    std::mt19937_64 gen_;
};

} // namespace pcmrbm
