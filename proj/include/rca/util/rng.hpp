#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace rca {

// Deterministic 64-bit generator (splitmix64). Used everywhere instead of
// <random> engines/distributions so that generated datasets are reproducible
// across standard-library implementations.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform integer in [lo, hi]. Modulo reduction: the tiny bias is
    // irrelevant for data synthesis and keeps the stream portable.
    std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi) {
        return lo + next() % (hi - lo + 1);
    }

    // Uniform double in [0, 1).
    double uniform01() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

// Derives the seed for one scenario attempt from the run seed. Scenario
// index and attempt number each perturb the stream independently, so
// resampling attempt a+1 of scenario i never disturbs any other scenario.
inline std::uint64_t derive_seed(std::uint64_t run_seed, std::uint64_t index,
                                 std::uint64_t attempt = 0) {
    SplitMix64 g(run_seed ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
    std::uint64_t h = g.next();
    SplitMix64 g2(h ^ (0xbf58476d1ce4e5b9ULL * (attempt + 1)));
    return g2.next();
}

// Samples a rank in [0, weights.size()) by cumulative inversion.
inline std::size_t sample_discrete(SplitMix64& rng, std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    double u = rng.uniform01() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        if (u < acc) return i;
    }
    return weights.size() - 1;
}

// Zipf weights over ranks 1..n: w_k = k^(-exponent).
inline std::vector<double> zipf_weights(std::size_t n, double exponent) {
    std::vector<double> w(n);
    for (std::size_t k = 0; k < n; ++k)
        w[k] = 1.0 / std::pow(static_cast<double>(k + 1), exponent);
    return w;
}

} // namespace rca
