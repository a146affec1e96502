#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace divetrack {

/// Seeded random source with a fixed, documented algorithm so seeds reproduce across
/// standard libraries (std distributions are implementation-defined, so none are used):
///
///   engine   std::mt19937_64 seeded with the 64-bit seed
///   uniform  (engine() >> 11) * 2^-53                      in [0, 1)
///   below(n) rejection sampling on engine() against the largest multiple of n
///   normal   Box-Muller, cosine branch only: sqrt(-2 ln(1 - u1)) * cos(2 pi u2)
///
/// Sub-streams come from derive_seed(), a splitmix64 finalizer over (seed, stream).
class Rng {
public:
    static constexpr int kVersion = 1;

    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t r = engine_();
        while (r >= limit) r = engine_();
        return r % n;
    }

    bool bernoulli(double p) { return uniform() < p; }

    double normal(double mean = 0.0, double sigma = 1.0) {
        const double u1 = uniform();
        const double u2 = uniform();
        const double z = std::sqrt(-2.0 * std::log(1.0 - u1)) * std::cos(2.0 * std::numbers::pi * u2);
        return mean + sigma * z;
    }

    /// Poisson draw by inversion of the cumulative sum (fine for the small means used here).
    std::uint64_t poisson(double mean) {
        if (!(mean > 0.0)) return 0;
        const double u = uniform();
        double p = std::exp(-mean);
        double cdf = p;
        std::uint64_t k = 0;
        while (u >= cdf && k < 10000) {
            ++k;
            p *= mean / static_cast<double>(k);
            cdf += p;
            if (p == 0.0) break;
        }
        return k;
    }

private:
    std::mt19937_64 engine_;
};

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace divetrack
