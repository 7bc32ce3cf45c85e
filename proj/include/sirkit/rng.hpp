#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "sirkit/errors.hpp"

namespace sirkit {

/// Identifier of the generator family, recorded in experiment reports.
inline constexpr const char* kRngId = "xoshiro256++/splitmix64";

/// Deterministic 64-bit generator with a fixed cross-platform stream:
/// the same seed yields the same draws on every build. Replicate streams
/// derived via mix() are independent by construction.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : seed_(seed) {
        // xoshiro256++ state from four splitmix64 outputs
        std::uint64_t z = seed;
        for (auto& s : state_) s = splitmix64(z);
    }

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() {
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

    /// Uniform on [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform on [0, hi).
    double uniform(double hi) { return hi * uniform01(); }

    /// Exponential with the given rate; strictly positive.
    double exponential(double rate) {
        double u = uniform01();
        while (u == 0.0) u = uniform01();
        return -std::log1p(-u) / rate;
    }

    /// Derived stream seed for a replicate (or sub-stream) index.
    static std::uint64_t mix(std::uint64_t master, std::uint64_t index) {
        std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
        return splitmix64_out(z);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    static std::uint64_t splitmix64(std::uint64_t& state) {
        state += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state;
        return splitmix64_out(z);
    }

    static std::uint64_t splitmix64_out(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t seed_;
    std::uint64_t state_[4];
};

/// Draws `m` individuals without replacement from a population partitioned
/// into categories with the given counts; returns per-category sample counts.
/// Exact multivariate hypergeometric sampling.
inline std::vector<long long> sample_without_replacement(std::span<const long long> counts,
                                                         long long m, SeededRng& rng) {
    long long remaining = 0;
    for (long long c : counts) {
        if (c < 0) throw InvalidParams("sample_without_replacement: negative category count");
        remaining += c;
    }
    if (m < 0 || m > remaining)
        throw InvalidParams("sample_without_replacement: sample size exceeds population");

    std::vector<long long> pool(counts.begin(), counts.end());
    std::vector<long long> taken(counts.size(), 0);
    for (long long draw = 0; draw < m; ++draw) {
        auto pick = static_cast<long long>(rng.uniform01() * static_cast<double>(remaining));
        if (pick >= remaining) pick = remaining - 1;
        for (std::size_t k = 0; k < pool.size(); ++k) {
            if (pick < pool[k]) {
                --pool[k];
                ++taken[k];
                break;
            }
            pick -= pool[k];
        }
        --remaining;
    }
    return taken;
}

} // namespace sirkit
