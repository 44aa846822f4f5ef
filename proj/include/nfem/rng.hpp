#pragma once
#include <cmath>
#include <complex>
#include <cstdint>

#include "nfem/constants.hpp"

namespace nfem {

/// Counter-based random stream: splitmix64 finalizer over (key, counter).
/// Sample i is a pure function of (seed, l, lp, i), so per-pair noise is
/// reproducible regardless of generation order.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t l, std::uint64_t lp)
        : key_(mix(mix(mix(seed) ^ (0x9E3779B97F4A7C15ULL + l)) ^
                   (0xD1B54A32D192ED03ULL + lp))) {}

    /// Uniform in (0, 1], indexed by counter.
    double uniform(std::uint64_t i) const {
        return (static_cast<double>(mix(key_ + i * 0xBF58476D1CE4E5B9ULL) >> 11) + 1.0) *
               0x1.0p-53;
    }

    /// Circular complex Gaussian with E|w|^2 = variance, via Box-Muller.
    std::complex<double> complex_normal(std::uint64_t i, double variance) const {
        const double u1 = uniform(2 * i);
        const double u2 = uniform(2 * i + 1);
        const double mag = std::sqrt(-std::log(u1) * variance);
        return {mag * std::cos(2.0 * kPi * u2), mag * std::sin(2.0 * kPi * u2)};
    }

private:
    static std::uint64_t mix(std::uint64_t x) {
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }
    std::uint64_t key_;
};

} // namespace nfem
