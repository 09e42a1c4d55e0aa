#pragma once

#include <cstdint>

namespace epb {

// Counter-style generator: the stream for replicate k is a pure function of
// (seed, k), so results do not depend on execution order or thread count.
class Rng {
public:
    explicit Rng(std::uint64_t state) : state_(state) {}

    static Rng for_replicate(std::uint64_t seed, std::uint64_t replicate) {
        std::uint64_t x = seed;
        std::uint64_t h = step(x);
        x = h ^ ((replicate + 0x632be59bd9b4e019ULL) * 0x9e3779b97f4a7c15ULL);
        step(x); // burn-in so nearby replicate indices decorrelate
        return Rng(x);
    }

    std::uint64_t next_u64() { return step(state_); }

    // Uniform on [0, 1), 53 random bits.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, bound) by rejection-free scaling (bound << 2^64).
    std::uint64_t next_below(std::uint64_t bound) { return next_u64() % bound; }

    bool next_sign() { return (next_u64() & 1ULL) != 0; }

private:
    static std::uint64_t step(std::uint64_t& x) {
        x += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = x;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

} // namespace epb
