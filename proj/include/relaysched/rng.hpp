#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace relaysched {

/// SplitMix64 finaliser; used only to derive seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Seed of stream `stream` under master seed `seed`. Streams are keyed by a
/// stable id (flow id, receiver index), so adding a stream never perturbs the
/// draws of the others.
constexpr std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) noexcept
{
    return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632BE59BD9B4E019ull));
}

/// mt19937_64 with portable variate generation: the engine output sequence is
/// fixed by the standard, and the transforms below do not depend on the
/// standard library's distribution implementations.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}
    RandomStream(std::uint64_t seed, std::uint64_t stream) : engine_(stream_seed(seed, stream)) {}

    /// Uniform on [0, 1) with 53 bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Exponential with the given rate (mean 1/rate).
    double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

    std::uint64_t next() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

} // namespace relaysched
