#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace morl {

/// Derives an independent child seed from a base seed and a stream index
/// (SplitMix64 finaliser). Used everywhere a deterministic fork is needed:
/// stream i of a run, episode i of a batch, member i of a population.
constexpr std::uint64_t seed_derive(std::uint64_t base, std::uint64_t stream) {
    std::uint64_t z = base + 0x9E3779B97F4A7C15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/**
 * Seeded random source with explicit sampling algorithms.
 *
 * The engine (mt19937_64) is fully specified by the standard and the
 * samplers below are implemented here rather than taken from
 * <random>'s distributions, whose output is implementation-defined.
 * Identical seeds therefore give identical streams on one platform,
 * and `stream(i)` forks are a pure function of the original seed, so
 * parallel and serial evaluation orders produce the same numbers.
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const { return seed_; }

    /// Child stream i, independent of how much of this stream was consumed.
    Rng stream(std::uint64_t i) const { return Rng(seed_derive(seed_, i)); }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller (no cached second value, so the
    /// engine state after a call never depends on call parity).
    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double two_pi = 6.283185307179586476925286766559;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
    }

    double normal(double mean, double std_dev) { return mean + std_dev * normal(); }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        // rejection sampling to avoid modulo bias
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - (std::numeric_limits<std::uint64_t>::max() % n);
        std::uint64_t x = engine_();
        while (x >= limit) x = engine_();
        return x % n;
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

} // namespace morl
