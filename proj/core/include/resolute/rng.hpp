#pragma once

#include <cstdint>
#include <cmath>

#include "resolute/math.hpp"

namespace resolute {

/// Counter-friendly pseudo-random stream (SplitMix64 core).
///
/// Substreams are derived by hashing (seed, point, repetition), so sweep
/// points and repetitions can be evaluated in any order with identical
/// results.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) { next(); }

    /// Substream for one repetition of one sweep point.
    static Rng substream(std::uint64_t seed, std::uint64_t point, std::uint64_t rep) {
        std::uint64_t s = seed;
        s = mix(s ^ (0x9E3779B97F4A7C15ull + point * 0xBF58476D1CE4E5B9ull));
        s = mix(s ^ (0x94D049BB133111EBull + rep * 0xD6E8FEB86659FD93ull));
        return Rng(s);
    }

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform in [0, 2*pi).
    double phase() { return two_pi * uniform(); }

    /// Standard normal via Box-Muller.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(two_pi * u2);
        have_spare_ = true;
        return r * std::cos(two_pi * u2);
    }

    bool bernoulli(double p) { return uniform() < p; }

    /// Number of successes in n Bernoulli(p) trials.
    int binomial(int n, double p) {
        int k = 0;
        for (int i = 0; i < n; ++i) k += bernoulli(p) ? 1 : 0;
        return k;
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace resolute
