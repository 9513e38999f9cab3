#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace vaxmed {

// SplitMix64 finaliser. Used to derive independent child seeds from a
// (seed, stream) pair so that replicate k of a bootstrap or unit block of a
// sampler gets the same stream no matter how work is scheduled.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

// Mersenne Twister (mt19937_64) seeded through SplitMix64. Uniform doubles
// take the top 53 bits, so streams are identical across standard libraries;
// binomial draws go through std::binomial_distribution.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    std::uint64_t next() { return engine_(); }

    // Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    // Index drawn from a cumulative distribution (last entry ~1).
    std::size_t categorical(std::span<const double> cumulative) {
        const double u = uniform();
        for (std::size_t i = 0; i + 1 < cumulative.size(); ++i) {
            if (u < cumulative[i]) return i;
        }
        return cumulative.size() - 1;
    }

    std::uint64_t binomial(std::uint64_t n, double p) {
        if (n == 0 || p <= 0.0) return 0;
        if (p >= 1.0) return n;
        std::binomial_distribution<std::uint64_t> dist(n, p);
        return dist(engine_);
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace vaxmed
