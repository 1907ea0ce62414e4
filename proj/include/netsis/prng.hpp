#pragma once

#include <cstdint>

namespace netsis {

/// Deterministic 64-bit generator (splitmix64). All seeded draws in the
/// toolkit go through this class so that identical seeds give identical
/// results across platforms and standard libraries.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next() noexcept {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Canonical 53-bit uniform in [0, 1).
    double uniform01() noexcept {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    /// Uniform in [lo, hi).
    double uniform_half_open(double lo, double hi) noexcept {
        return lo + (hi - lo) * uniform01();
    }

    /// Uniform in the open interval (lo, hi); exact endpoints are resampled.
    double uniform_open(double lo, double hi) noexcept {
        for (;;) {
            const double v = uniform_half_open(lo, hi);
            if (v > lo && v < hi) return v;
        }
    }

  private:
    std::uint64_t state_;
};

/// Derives an independent stream seed from (seed, stream). Used wherever one
/// user-facing seed has to fan out into several generators.
[[nodiscard]] constexpr std::uint64_t mix_seed(std::uint64_t seed,
                                               std::uint64_t stream) noexcept {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace netsis
