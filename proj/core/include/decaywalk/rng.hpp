#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace decaywalk {

/// SplitMix64 (Steele, Lea, Flood). Used to derive substream keys and to seed
/// the main generator.
constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept
{
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// xoshiro256** 1.0 (Blackman, Vigna). Satisfies UniformRandomBitGenerator.
class Xoshiro256
{
public:
    using result_type = std::uint64_t;

    explicit constexpr Xoshiro256(std::uint64_t seed) noexcept
    {
        for (auto& word : state_)
            word = splitmix64(seed);
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() noexcept
    {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double strictly inside (0, 1): 52 random bits centred in their
    /// cell. (With 53 bits the top cell rounds up to exactly 1.)
    constexpr double uniform_open() noexcept { return to_open_unit((*this)()); }

    static constexpr double to_open_unit(std::uint64_t bits) noexcept
    {
        return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

    std::array<std::uint64_t, 4> state_{};
};

/// Independent stream for item `index` of run `seed`. `tag` separates
/// different kinds of runs that share a seed.
constexpr Xoshiro256 substream(std::uint64_t seed, std::uint64_t tag, std::uint64_t index) noexcept
{
    std::uint64_t a = seed;
    std::uint64_t key = splitmix64(a);
    std::uint64_t b = key ^ (tag * 0xd1b54a32d192ed03ULL);
    key = splitmix64(b);
    std::uint64_t c = key ^ index;
    return Xoshiro256{splitmix64(c)};
}

}  // namespace decaywalk
