#pragma once

#include <cstdint>
#include <random>

namespace asir {

/// SplitMix64 output function (Steele, Lea & Flood). Used only to derive
/// per-stream seeds, never to produce simulation draws.
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

constexpr std::uint64_t kSplitMix64Gamma = 0x9E3779B97F4A7C15ull;

/// Seed of the derived stream with the given index: the (index+1)-th output
/// of a SplitMix64 sequence started at master_seed. Closed form, so streams
/// can be created in any order.
constexpr std::uint64_t derive_stream_seed(std::uint64_t master_seed, std::uint64_t index) {
    return splitmix64_mix(master_seed + (index + 1) * kSplitMix64Gamma);
}

/// Seedable uniform stream. One mt19937_64 output per draw, mapped to a
/// 53-bit uniform in (0, 1]. Every stochastic decision in the toolkit
/// consumes exactly one draw and fires iff draw <= probability, which makes
/// probability-0 events impossible and probability-1 events certain.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    static RandomStream for_replicate(std::uint64_t master_seed, std::uint64_t replicate_index) {
        return RandomStream(derive_stream_seed(master_seed, replicate_index));
    }

    /// Uniform draw in (0, 1].
    double uniform() { return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53; }

    /// Recorded in run metadata so a run can be reproduced elsewhere.
    static constexpr const char* kAlgorithm =
        "mt19937_64; 53-bit uniforms in (0,1]; streams seeded by splitmix64(master + (i+1)*golden)";

private:
    std::mt19937_64 engine_;
};

}  // namespace asir
