#pragma once

#include <cstdint>
#include <random>

namespace synthfm {

/// Seeded pseudo-random source passed explicitly to every stochastic operation.
/// Remembers the seed it was constructed from so failures can report it.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const noexcept { return seed_; }
    std::mt19937_64& engine() noexcept { return engine_; }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1).
    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

    /// Uniform in [lo, hi); returns lo when the interval is degenerate.
    double uniform(double lo, double hi)
    {
        if (!(hi > lo))
            return lo;
        return std::uniform_real_distribution<double>(lo, hi)(engine_);
    }

    /// Uniform integer in the closed interval [lo, hi].
    int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }

    std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_); }

    bool bernoulli(double p) { return uniform() < p; }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

} // namespace synthfm
