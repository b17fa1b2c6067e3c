#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace confseq {

// SplitMix64 finalizer; bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Counter-based generator keyed by (seed, stream).
///
/// The n-th output is a pure function of (seed, stream, n), so workers that own
/// different streams produce the same numbers regardless of scheduling.
/// Satisfies UniformRandomBitGenerator.
class CounterRng {
public:
    using result_type = std::uint64_t;

    static constexpr std::uint64_t golden = 0x9e3779b97f4a7c15ULL;

    CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter = 0) noexcept
        : key_(mix64(mix64(seed + golden) ^ (stream * 0xd1b54a32d192ed03ULL + 0x8cb92ba72f3d8dd7ULL))), counter_(counter) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept { return mix64(key_ + golden * ++counter_); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
    /// +1 or -1 with equal probability.
    double rademacher() noexcept { return ((*this)() >> 63) ? 1.0 : -1.0; }

    std::uint64_t counter() const noexcept { return counter_; }
    /// Jump to an absolute position in the stream.
    void seek(std::uint64_t counter) noexcept { counter_ = counter; }

private:
    std::uint64_t key_;
    std::uint64_t counter_;
};

/// Sub-stream id for the pair (a, b); used to key (run, step) style streams.
constexpr std::uint64_t stream_id(std::uint64_t a, std::uint64_t b) noexcept { return mix64(a * 0x9e3779b97f4a7c15ULL ^ mix64(b + 1)); }

}  // namespace confseq
