#pragma once

#include <cstdint>
#include <limits>

namespace ifsmod {

/**
 * Portable, bit-reproducible generator used by the chaos game.
 *
 * The state is a single nonzero 64-bit word s. Seeding runs one SplitMix64 step on
 * the user seed:
 *
 *     z = seed + 0x9E3779B97F4A7C15
 *     z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
 *     z = (z ^ (z >> 27)) * 0x94D049BB133111EB
 *     s = z ^ (z >> 31)            (s = 0x9E3779B97F4A7C15 if that is 0)
 *
 * Each draw is one xorshift64* step (all arithmetic mod 2^64):
 *
 *     s ^= s >> 12;  s ^= s << 25;  s ^= s >> 27
 *     return s * 0x2545F4914F6CDD1D
 *
 * A uniform real in [0, 1) is (draw >> 11) * 2^-53.
 */
class Xorshift64Star {
public:
    using result_type = std::uint64_t;

    explicit constexpr Xorshift64Star(std::uint64_t seed = 0) : state_(mix(seed)) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() {
        state_ ^= state_ >> 12;
        state_ ^= state_ << 25;
        state_ ^= state_ >> 27;
        return state_ * 0x2545F4914F6CDD1DULL;
    }

    /// Uniform in [0, 1), 53 bits of resolution.
    constexpr double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    constexpr std::uint64_t state() const { return state_; }

private:
    static constexpr std::uint64_t mix(std::uint64_t seed) {
        std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        z ^= z >> 31;
        return z != 0 ? z : 0x9E3779B97F4A7C15ULL;
    }

    std::uint64_t state_;
};

}  // namespace ifsmod
