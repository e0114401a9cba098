#pragma once

#include <cstdint>
#include <span>
#include <string_view>

namespace bellgame {

// Deterministic pseudo-randomness for reproducible runs.
//
// The project uses a single generator algorithm everywhere: xoshiro256**
// seeded through SplitMix64. Both are pure 64-bit integer arithmetic, so
// identical seeds give identical streams on every platform. Floating-point
// uniforms are produced by the usual 53-bit mantissa trick.
//
// Stream splitting rule: each policy in a run owns its own stream, derived
// from the run's master seed as
//
//     stream_seed = master_seed XOR fnv1a64(role_label)
//
// expanded through SplitMix64. Role labels are fixed strings such as
// "scientist" or "nature_b"; the mapping is part of the file-format
// contract, since replays depend on it.

class SplitMix64 {
public:
    explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

    constexpr std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

constexpr std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    return h;
}

class Xoshiro256ss {
public:
    explicit constexpr Xoshiro256ss(std::uint64_t seed) {
        SplitMix64 sm(seed);
        for (auto& w : state_) w = sm.next();
    }

    constexpr std::uint64_t next() {
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

    // Uniform double in [0, 1).
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Unbiased integer in [0, bound) by rejection.
    std::uint64_t uniform_int(std::uint64_t bound) {
        const std::uint64_t limit = bound * (UINT64_MAX / bound);
        std::uint64_t x;
        do {
            x = next();
        } while (x >= limit);
        return x % bound;
    }

    bool coin() { return (next() >> 63) != 0; }

    // Index drawn from a discrete distribution, scanning weights in order.
    std::size_t sample(std::span<const double> weights) {
        double u = uniform01();
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
            acc += weights[i];
            if (u < acc) return i;
        }
        return weights.size() - 1;
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4]{};
};

inline Xoshiro256ss make_stream(std::uint64_t master_seed, std::string_view role) {
    return Xoshiro256ss(master_seed ^ fnv1a64(role));
}

}  // namespace bellgame
