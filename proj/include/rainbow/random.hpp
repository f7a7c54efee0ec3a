#pragma once

// SplitMix64 (Steele, Lea, Flood 2014): a 64-bit state advanced by the golden
// gamma 0x9e3779b97f4a7c15, output through the MurmurHash3-style finalizer.
//
// Streams: stream(seed, index) seeds a generator with
//   mix64(seed ^ mix64(index + 0x632be59bd9b4e019)),
// so each (seed, worker/chunk/restart index) pair owns an independent,
// reproducible sequence.  Bounded draws use rejection sampling rather than
// std::uniform_int_distribution, whose output is library-specific.

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace rainbow {

constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class SplitMix64 {
public:
    using result_type = std::uint64_t;

    constexpr explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    static constexpr SplitMix64 stream(std::uint64_t seed, std::uint64_t index) noexcept
    {
        return SplitMix64(mix64(seed ^ mix64(index + 0x632be59bd9b4e019ULL)));
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~result_type{0}; }

    constexpr result_type operator()() noexcept
    {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix64(state_);
    }

    /// Uniform integer in [0, bound); bound must be positive.
    constexpr std::uint64_t below(std::uint64_t bound) noexcept
    {
        const std::uint64_t limit = max() - max() % bound;
        std::uint64_t x = (*this)();
        while (x >= limit)
            x = (*this)();
        return x % bound;
    }

    template <typename T>
    void shuffle(std::span<T> items) noexcept
    {
        for (std::size_t i = items.size(); i > 1; --i)
            std::swap(items[i - 1], items[below(i)]);
    }

    template <typename T>
    void shuffle(std::vector<T>& items) noexcept
    {
        shuffle(std::span<T>(items));
    }

private:
    std::uint64_t state_;
};

} // namespace rainbow
