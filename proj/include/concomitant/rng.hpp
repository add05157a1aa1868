#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace concomitant {

/// Counter-based generator: output k is a SplitMix64 finalizer applied to
/// (key + k * golden_gamma). Stream position is explicit, so identical
/// (seed, draw sequence) gives identical bits on every platform.
class CounterRng {
public:
    explicit constexpr CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
        : key_{mix(seed ^ mix(stream + 0x632BE59BD9B4E019ULL))} {}

    constexpr std::uint64_t next_u64() noexcept {
        return mix(key_ + (counter_++) * 0x9E3779B97F4A7C15ULL);
    }

    /// Uniform on the open interval (0, 1), 53 bits.
    double uniform() noexcept {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller; the spare value is cached.
    double normal() noexcept {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

    /// Standard complex Gaussian, E|z|^2 = 1.
    std::complex<double> complex_normal() noexcept {
        const double re = normal();
        const double im = normal();
        return {re * (1.0 / std::numbers::sqrt2), im * (1.0 / std::numbers::sqrt2)};
    }

    /// Derive an independent generator for a sub-task (trial index etc).
    [[nodiscard]] CounterRng split(std::uint64_t index) const noexcept {
        CounterRng child{0};
        child.key_ = mix(key_ ^ mix(index + 0xD1B54A32D192ED03ULL));
        return child;
    }

private:
    static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace concomitant
