#pragma once

#include <cmath>
#include <cstdint>

namespace twirlcorr {

// Counter-based randomness. Every consumer derives an independent stream from
// (seed, counter, stream_tag), so sample k is identical no matter how many
// workers draw samples or in which order.
inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// xoshiro256** seeded via splitmix64.
class Rng {
   public:
    Rng(uint64_t seed, uint64_t counter, uint64_t stream_tag = 0) {
        uint64_t x = seed;
        x = splitmix64(x ^ splitmix64(counter));
        x = splitmix64(x ^ splitmix64(stream_tag ^ 0xa0761d6478bd642fULL));
        for (auto& w : s_) {
            x = splitmix64(x);
            w = x;
        }
        has_cached_normal_ = false;
        cached_normal_ = 0.0;
    }

    uint64_t next_u64() {
        uint64_t result = rotl(s_[1] * 5, 7) * 9;
        uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform in [0, 1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0, bound) without modulo bias (bound > 0).
    uint64_t next_below(uint64_t bound) {
        uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            uint64_t r = next_u64();
            if (r >= threshold) {
                return r % bound;
            }
        }
    }

    bool next_bool() {
        return (next_u64() >> 63) != 0;
    }

    // Standard normal via Box-Muller (portable, stdlib-independent).
    double next_normal() {
        if (has_cached_normal_) {
            has_cached_normal_ = false;
            return cached_normal_;
        }
        double u1 = 0.0;
        do {
            u1 = next_double();
        } while (u1 <= 0.0);
        double u2 = next_double();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        cached_normal_ = r * std::sin(a);
        has_cached_normal_ = true;
        return r * std::cos(a);
    }

   private:
    static uint64_t rotl(uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    uint64_t s_[4];
    bool has_cached_normal_;
    double cached_normal_;
};

// FNV-1a, used for stable circuit hashes and stream derivation.
inline uint64_t fnv1a64(const void* data, size_t len, uint64_t h = 0xcbf29ce484222325ULL) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < len; i++) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace twirlcorr
