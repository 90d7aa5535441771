#pragma once

#include <cmath>
#include <cstdint>
#include <optional>

namespace rwl1 {

/// SplitMix64 (https://prng.di.unimi.it). Every derived variate is built from
/// this stream only, so instances regenerate identically everywhere.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform on the open interval (0, 1): top 53 bits, offset by half a step.
    double uniform_open() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

    /// Uniform integer in [0, bound) by 128-bit multiply-high.
    std::uint64_t below(std::uint64_t bound) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
    }

    /// Standard normal by Box–Muller; the second variate of each pair is cached.
    double standard_normal() {
        if (cached_normal_) {
            const double z = *cached_normal_;
            cached_normal_.reset();
            return z;
        }
        const double u1 = uniform_open();
        const double u2 = uniform_open();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * 3.14159265358979323846 * u2;
        cached_normal_ = radius * std::sin(angle);
        return radius * std::cos(angle);
    }

    std::uint64_t state() const noexcept { return state_; }

private:
    std::uint64_t state_;
    std::optional<double> cached_normal_;
};

/// One SplitMix64 output for the given state, used to hash seeds.
inline std::uint64_t splitmix64_hash(std::uint64_t value) {
    SeededRng rng(value);
    return rng.next_u64();
}

} // namespace rwl1
