#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace gumdp {

/// SplitMix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x);

/**
 * Derives the seed of child `index` from `seed`:
 *
 *   mix_seed(seed, index) = splitmix64(seed ^ splitmix64(index + 0x9E3779B97F4A7C15))
 *
 * Every seeded sub-computation (episode, run, planner call) takes its seed
 * from this function, so any one of them can be replayed in isolation.
 */
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index);

/// Seeded random source. Sampling is implemented here rather than through
/// <random> distributions so that streams are identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n), n >= 1.
    std::size_t below(std::size_t n);

    /// Index drawn with probability proportional to weights (which should sum to ~1).
    /// Zero-weight entries are never returned.
    std::size_t categorical(std::span<const double> weights);

private:
    std::mt19937_64 engine_;
};

}  // namespace gumdp
