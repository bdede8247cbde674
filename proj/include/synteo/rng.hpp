#pragma once

#include <cstdint>
#include <limits>

namespace synteo {

// Seedable, cross-platform-stable generator: xoshiro256** seeded through
// splitmix64. std::mt19937 distributions are not bit-stable across standard
// library implementations, so draws are derived here directly.
class Rng {
public:
    explicit Rng(uint64_t seed) : seed_(seed) {
        uint64_t x = seed;
        for (auto& word : state_) word = splitmix64(x);
    }

    uint64_t seed() const { return seed_; }
    uint64_t draw_count() const { return draws_; }

    uint64_t next_u64() {
        ++draws_;
        const uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform integer in [lo, hi], inclusive.
    int64_t uniform_int(int64_t lo, int64_t hi) {
        const uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
        return lo + static_cast<int64_t>(bounded(span));
    }

    // Uniform real in [lo, hi).
    double uniform_real(double lo, double hi) {
        const double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
        return lo + u * (hi - lo);
    }

    // Uniform index in [0, n).
    uint64_t bounded(uint64_t n) {
        if (n <= 1) {
            next_u64();  // keep the draw counter aligned for any n
            return 0;
        }
        return static_cast<uint64_t>(
            (static_cast<__uint128_t>(next_u64()) * n) >> 64);
    }

    // Stable derivation of a child seed, for per-example RNG streams.
    static uint64_t derive_seed(uint64_t base, uint64_t salt) {
        uint64_t x = base ^ salt;
        return splitmix64(x);
    }

private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    static uint64_t splitmix64(uint64_t& x) {
        uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    uint64_t seed_;
    uint64_t state_[4]{};
    uint64_t draws_ = 0;
};

}  // namespace synteo
