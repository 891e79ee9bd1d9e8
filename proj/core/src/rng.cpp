#include "gumdp/rng.hpp"

#include <stdexcept>

namespace gumdp {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(seed ^ splitmix64(index + 0x9E3779B97F4A7C15ULL));
}

std::size_t Rng::below(std::size_t n) {
    if (n == 0) throw std::invalid_argument("Rng::below: empty range");
    // Lemire-style rejection keeps the result unbiased.
    const std::uint64_t bound = n;
    const std::uint64_t limit = (~std::uint64_t{0} - bound + 1) % bound;
    for (;;) {
        const std::uint64_t x = engine_();
        if (x >= limit) return static_cast<std::size_t>(x % bound);
    }
}

std::size_t Rng::categorical(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    const double u = uniform() * total;
    double acc = 0.0;
    std::size_t last_positive = weights.size();
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] <= 0.0) continue;
        acc += weights[i];
        last_positive = i;
        if (u < acc) return i;
    }
    if (last_positive == weights.size())
        throw std::invalid_argument("Rng::categorical: no positive weight");
    return last_positive;  // rounding slack at the top end
}

}  // namespace gumdp
