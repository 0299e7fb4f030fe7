#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace briervar {

/// SplitMix64 output function (Steele, Lea & Flood); bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// xoshiro256++ seeded through SplitMix64, with explicit substreams.
///
/// All state of substream (seed, stream) is a pure function of those two
/// words, so trial i of a Monte Carlo run draws the same sequence no matter
/// which thread runs it or in which order trials execute. No platform- or
/// implementation-defined distributions are used anywhere: uniform doubles
/// take the top 53 bits, integers use 128-bit multiply-shift, and Gaussians
/// come from the Marsaglia polar transform.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) noexcept {
        constexpr std::uint64_t golden = 0x9E3779B97F4A7C15ull;
        std::uint64_t s = mix64(seed + golden) ^ mix64(stream + 0x5851F42D4C957F2Dull);
        for (auto& word : state_) word = mix64(s += golden);
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[3] = golden;
    }

    std::uint64_t next() noexcept {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound). Multiply-shift map; the residual bias of
    /// bound/2^64 is far below anything observable here.
    std::uint32_t below(std::uint32_t bound) noexcept {
        return static_cast<std::uint32_t>(
            (static_cast<unsigned __int128>(next()) * bound) >> 64);
    }

    bool bernoulli(double q) noexcept { return uniform() < q; }

    /// Standard normal deviate, Marsaglia polar method. The rejected pair's
    /// partner is cached, so draws stay a deterministic function of the state.
    double gaussian() noexcept {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        have_spare_ = true;
        return u * m;
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace briervar
