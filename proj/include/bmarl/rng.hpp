#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace bmarl {

// splitmix64, used to expand seeds and derive independent streams.
inline uint64_t seed_mix(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline uint64_t seed_mix(uint64_t a, uint64_t b) { return seed_mix(seed_mix(a) ^ b); }
inline uint64_t seed_mix(uint64_t a, uint64_t b, uint64_t c) { return seed_mix(seed_mix(a, b) ^ c); }
inline uint64_t seed_mix(uint64_t a, uint64_t b, uint64_t c, uint64_t d) {
    return seed_mix(seed_mix(a, b, c) ^ d);
}

// Deterministic RNG. mt19937_64 has a standardized bit stream; the
// distributions below are written out by hand so draws are identical on
// every platform (std:: distribution algorithms are implementation-defined).
class Rng {
public:
    explicit Rng(uint64_t seed = 0) : engine_(seed_mix(seed)) {}

    uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Unbiased uniform integer in [0, n).
    uint64_t uniform_int(uint64_t n) {
        const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % n;
    }

    // Standard normal via Box-Muller; the spare value is cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1, u2;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * M_PI * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace bmarl
