#pragma once

#include <cstdint>
#include <random>

namespace fishnet {

/// SplitMix64 finalizer; a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed of the independent stream used by sample `index` of a run.
///
/// The mapping depends only on (master_seed, index), so a batch produces the
/// same per-sample streams regardless of how samples are scheduled on threads.
constexpr std::uint64_t stream_seed(std::uint64_t master_seed,
                                    std::uint64_t index) noexcept
{
    constexpr std::uint64_t golden = 0x9e3779b97f4a7c15ULL;
    return mix64(mix64(master_seed) + golden * (index + 1));
}

/// Uniform variates strictly inside (0, 1) from a 64-bit engine.
///
/// std::uniform_real_distribution is implementation-defined, so the
/// conversion is done by hand to keep sample streams portable.
class UniformStream {
  public:
    explicit UniformStream(std::uint64_t seed) : engine_(seed) {}

    double operator()()
    {
        // 53 random mantissa bits, shifted by half an ulp away from 0.
        auto bits = engine_() >> 11;
        return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace fishnet
