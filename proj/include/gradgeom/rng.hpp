#pragma once

#include <cstdint>
#include <vector>

namespace gradgeom {

// splitmix64; used for seeding and for deriving independent streams.
// Test vectors for seed 1234567 are frozen in tests/test_rng.cpp.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// xoshiro256** seeded through splitmix64. All stochastic operations in the
// toolkit draw from this generator with an explicit caller-provided seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64(sm);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform in [0, 1), 53-bit resolution
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform in [lo, hi)
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // standard normal via Box-Muller (deterministic; one cached value)
    double normal();

    // uniform integer in [0, n)
    std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

    // Rademacher +-1
    double sign() { return (next_u64() & 1u) ? 1.0 : -1.0; }

    std::vector<double> normal_vector(std::size_t n);
    std::vector<double> rademacher_vector(std::size_t n);

    // independent stream for sketch/probe index i. The seed is mixed before
    // the index is folded in, so structured (seed, index) pairs cannot
    // collide and streams across nearby seeds stay uncorrelated.
    static Rng derived(std::uint64_t seed, std::uint64_t index) {
        std::uint64_t sm = seed;
        sm = splitmix64(sm) ^ (index * 0x9e3779b97f4a7c15ULL);
        return Rng(splitmix64(sm));
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t s_[4]{};
    bool have_cached_ = false;
    double cached_ = 0.0;
};

}  // namespace gradgeom
