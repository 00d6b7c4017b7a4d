#pragma once

#include <cmath>
#include <cstdint>

namespace rstop {

// PCG64 (XSL-RR) with state and stream derived deterministically from
// (seed, stream): the generator for a path is a pure function of the pair, so
// chunked parallel runs reproduce serial runs bit for bit.
class Pcg64 {
public:
    Pcg64(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t x = seed;
        x ^= stream + 0x9e3779b97f4a7c15ULL + (x << 6) + (x >> 2);
        std::uint64_t s0 = splitmix64(x);
        std::uint64_t s1 = splitmix64(x);
        std::uint64_t s2 = splitmix64(x);
        std::uint64_t s3 = splitmix64(x);
        state_ = (static_cast<unsigned __int128>(s0) << 64) | s1;
        inc_ = ((static_cast<unsigned __int128>(s2) << 64 | s3) << 1) | 1u;
        next_u64();
    }

    std::uint64_t next_u64() {
        state_ = state_ * MULT + inc_;
        std::uint64_t hi = static_cast<std::uint64_t>(state_ >> 64);
        std::uint64_t lo = static_cast<std::uint64_t>(state_);
        unsigned rot = static_cast<unsigned>(state_ >> 122);
        std::uint64_t word = hi ^ lo;
        return (word >> rot) | (word << ((-rot) & 63u));
    }

    // uniform on [0, 1) with 53-bit resolution
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

private:
    static std::uint64_t splitmix64(std::uint64_t& x) {
        x += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = x;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    static constexpr unsigned __int128 MULT =
        (static_cast<unsigned __int128>(2549297995355413924ULL) << 64) |
        4865540595714422341ULL;

    unsigned __int128 state_ = 0;
    unsigned __int128 inc_ = 1;
};

// 128-layer ziggurat sampler for the standard normal (Marsaglia-Tsang layout,
// 56-bit magnitudes). Tables are built once per process.
class NormalSampler {
public:
    NormalSampler();
    double sample(Pcg64& rng) const;

private:
    static constexpr int LAYERS = 128;
    static constexpr double R = 3.442619855899;       // base layer x-extent
    static constexpr double V = 9.91256303526217e-3;  // per-layer area
    std::uint64_t kn_[LAYERS];
    double wn_[LAYERS];
    double fn_[LAYERS];
};

// Reference normal via the polar method; used to cross-check the ziggurat.
double polar_normal(Pcg64& rng);

} // namespace rstop
