#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace targetsearch {

/// Deterministic random stream. A (seed, stream) pair fully determines the
/// draw sequence for a given build, independent of the standard library's
/// distribution implementations. Streams derived from the same seed are
/// statistically independent, so replicates and modules can draw in parallel
/// without sharing state.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed, std::uint64_t stream = 0)
        : seed_(seed), stream_(stream) {
        // splitmix64 expansion of (seed, stream) into the xoshiro256++ state
        std::uint64_t x = seed ^ (0x9E3779B97F4A7C15ULL * (stream + 1));
        for (auto& word : state_) {
            x += 0x9E3779B97F4A7C15ULL;
            std::uint64_t z = x;
            z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
            z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
            word = z ^ (z >> 31);
        }
    }

    /// Independent stream derived from the same master seed.
    [[nodiscard]] RandomSource stream(std::uint64_t id) const {
        std::uint64_t mixed = stream_ * 0x2545F4914F6CDD1DULL + id + 1;
        return RandomSource(seed_, mixed);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1).
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    /// Uniform integer in [0, n); n must be positive.
    int uniform_int(int n) {
        const int v = static_cast<int>(uniform01() * static_cast<double>(n));
        return v >= n ? n - 1 : v;
    }

    /// Standard normal via Box-Muller (second draw cached).
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform01();  // (0, 1]
        const double u2 = uniform01();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * M_PI * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    [[nodiscard]] std::uint64_t seed() const { return seed_; }
    [[nodiscard]] std::uint64_t stream_id() const { return stream_; }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_{};
    std::uint64_t seed_ = 0;
    std::uint64_t stream_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace targetsearch
