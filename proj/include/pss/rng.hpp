// Copyright 2026 The postselect-squeeze Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <limits>

namespace pss {

/**
 * xorshift64* generator (Vigna 2016): state update x ^= x >> 12; x ^= x << 25;
 * x ^= x >> 27, output x * 0x2545F4914F6CDD1D. The user seed is passed through
 * one splitmix64 step so that seed 0 still gives a nonzero state.
 *
 * Fixed here so random geometries are bit-reproducible across builds and
 * across independent implementations of the same scheme.
 */
class Xorshift64Star {
public:
    using result_type = std::uint64_t;

    explicit Xorshift64Star(std::uint64_t seed) noexcept : state_(splitmix64(seed)) {
        if (state_ == 0) state_ = 0x9E3779B97F4A7C15ULL;
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        state_ ^= state_ >> 12;
        state_ ^= state_ << 25;
        state_ ^= state_ >> 27;
        return state_ * 0x2545F4914F6CDD1DULL;
    }

    /// Uniform double in [0, 1) from the top 53 bits.
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    static constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

private:
    std::uint64_t state_;
};

}  // namespace pss
