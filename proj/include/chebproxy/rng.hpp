#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace chebproxy {

/// Counter-based generator: every draw is a pure function of
/// (seed, stream, counter), mixed with the SplitMix64 finalizer. Streams are
/// indexed by path so results do not depend on evaluation order or threads.
struct CounterRng {
    static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    static constexpr std::uint64_t bits(std::uint64_t seed, std::uint64_t stream,
                                        std::uint64_t counter) noexcept {
        return mix(mix(mix(seed) ^ stream) ^ counter);
    }

    /// Uniform on the open interval (0, 1), 53-bit resolution.
    static constexpr double uniform(std::uint64_t seed, std::uint64_t stream,
                                    std::uint64_t counter) noexcept {
        return (static_cast<double>(bits(seed, stream, counter) >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal by Box-Muller on draws 2*index and 2*index+1.
    static double normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) noexcept {
        const double u1 = uniform(seed, stream, 2 * index);
        const double u2 = uniform(seed, stream, 2 * index + 1);
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    /// Both Box-Muller outputs for the pair at `index`.
    static void normal_pair(std::uint64_t seed, std::uint64_t stream, std::uint64_t index,
                            double& z0, double& z1) noexcept {
        const double u1 = uniform(seed, stream, 2 * index);
        const double u2 = uniform(seed, stream, 2 * index + 1);
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        z0 = r * std::cos(a);
        z1 = r * std::sin(a);
    }
};

}  // namespace chebproxy
