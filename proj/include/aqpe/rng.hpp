#pragma once

#include <cmath>
#include <cstdint>

#include "aqpe/phase.hpp"

namespace aqpe {

// Counter-based splittable pseudo-random stream. A stream is a (key, counter)
// pair; the n-th output is a pure function of (key, n), so streams can be
// derived per work unit (episode, particle, grid cell) and consumed in any
// execution order while reproducing identical sequences. Output quality comes
// from the 64-bit finalizer used by splitmix64.
struct RngStream {
    std::uint64_t key = 0;
    std::uint64_t counter = 0;

    static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ull;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBull;
        z ^= z >> 31;
        return z;
    }

    static RngStream from_seed(std::uint64_t seed) {
        return RngStream{mix(seed + kGolden), 0};
    }

    // Independent child stream. Children with distinct ids, and streams with
    // distinct keys, produce unrelated sequences.
    RngStream substream(std::uint64_t stream_id) const {
        return RngStream{mix(key ^ mix(stream_id + kGolden)), 0};
    }

    std::uint64_t next_u64() {
        counter += 1;
        return mix(key + counter * kGolden);
    }

    // Uniform double in [0, 1), 53 mantissa bits.
    double next_uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0, bound) via the multiply-shift reduction; always
    // consumes exactly one draw. Bias is O(bound / 2^64), negligible here.
    std::uint64_t next_below(std::uint64_t bound) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
    }

    // Standard normal via the Box-Muller cosine branch; consumes exactly two
    // draws per call. The first uniform is offset into (0, 1) so log() is
    // always finite.
    double next_normal();
};

inline double RngStream::next_normal() {
    double u1 = (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    double u2 = next_uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

} // namespace aqpe
