#pragma once
// Counter-based random source. Every draw is a pure function of
// (seed, stream, unit, index), so parallel generation over any partition of
// units reproduces the same values.

#include <cmath>
#include <cstdint>

#include "corex/common.hpp"

namespace corex {

namespace detail {
inline u64 splitmix64(u64 x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}
}  // namespace detail

// Stateless keyed generator. `stream` separates draw purposes, `unit` is the
// entity (e.g. firm index), `idx` the draw counter within that purpose.
class KeyedRng {
public:
    explicit KeyedRng(u64 seed) : seed_(seed) {}

    u64 bits(u64 stream, u64 unit, u64 idx) const {
        u64 h = detail::splitmix64(seed_ ^ 0x6a09e667f3bcc909ULL);
        h = detail::splitmix64(h ^ stream);
        h = detail::splitmix64(h ^ unit);
        h = detail::splitmix64(h ^ idx);
        return h;
    }

    // Uniform in [0, 1).
    double uniform(u64 stream, u64 unit, u64 idx) const {
        return double(bits(stream, unit, idx) >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0, n).
    u64 uniform_int(u64 stream, u64 unit, u64 idx, u64 n) const {
        return u64(uniform(stream, unit, idx) * double(n)) % n;
    }

    // Standard normal via Box-Muller; consumes draw indices 2*idx and 2*idx+1.
    double normal(u64 stream, u64 unit, u64 idx) const {
        double u1 = uniform(stream, unit, 2 * idx);
        double u2 = uniform(stream, unit, 2 * idx + 1);
        if (u1 < 1e-300) u1 = 1e-300;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
    }

    // Exponential with mean 1.
    double exponential(u64 stream, u64 unit, u64 idx) const {
        double u = uniform(stream, unit, idx);
        if (u >= 1.0) u = 0.9999999999999999;
        return -std::log1p(-u);
    }

    u64 seed() const { return seed_; }

private:
    u64 seed_;
};

}  // namespace corex
