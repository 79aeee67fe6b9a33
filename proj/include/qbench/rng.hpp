#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qbench {

// Deterministic 64-bit generator (xoshiro256** seeded through splitmix64).
// We avoid std:: distributions so that bit streams are identical across
// standard library implementations.
class Rng {
public:
    explicit Rng(uint64_t seed) {
        uint64_t x = seed;
        for (auto& w : s_) w = splitmix64(x);
    }

    uint64_t next_u64() {
        const uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform double in [0, 1) with 53 random bits.
    double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n).
    uint64_t next_below(uint64_t n) {
        // Rejection-free multiply-shift is fine for our n << 2^64.
        return uint64_t((__uint128_t(next_u64()) * n) >> 64);
    }

    static uint64_t splitmix64(uint64_t& x) {
        uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    static uint64_t rotl(uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }
    uint64_t s_[4];
};

// Derives an independent stream for a named circuit/unit of work from the
// root seed, so parallel grid drivers stay reproducible.
inline uint64_t derive_seed(uint64_t root_seed, const std::string& stream_id) {
    uint64_t h = 0xcbf29ce484222325ULL ^ root_seed;
    for (unsigned char c : stream_id) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    uint64_t x = h;
    return Rng::splitmix64(x);
}

inline uint64_t derive_seed(uint64_t root_seed, uint64_t index) {
    uint64_t x = root_seed ^ (0x9e3779b97f4a7c15ULL + index * 0xbf58476d1ce4e5b9ULL);
    return Rng::splitmix64(x);
}

}  // namespace qbench
