#pragma once

#include <cstdint>
#include <random>

namespace ibf {

// Seedable 64-bit generator. The engine is mt19937_64 (the one algorithm the
// config file accepts) and every transform on top of it is hand-rolled, so a
// stream of draws depends only on the seed, never on the standard library's
// distribution internals. Sub-streams are derived by mixing (seed, tag, index)
// through a splitmix64 finalizer, which keeps parallel sample preparation
// order-independent and makes resumed runs replay the exact same draws.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // Uniform in [0, n), unbiased (rejection sampling). n >= 1.
    std::uint64_t below(std::uint64_t n);

    // Uniform integer in [lo, hi], inclusive.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

    // Uniform real in [0, 1), 53-bit resolution.
    double uniform01();

    double uniform(double lo, double hi);

    // Standard normal via Box-Muller; draws exactly two engine values per
    // call and keeps no cached state.
    double normal();

    static std::uint64_t mix(std::uint64_t h, std::uint64_t v);
    static Rng substream(std::uint64_t seed, std::uint64_t tag, std::uint64_t index);

private:
    std::mt19937_64 eng_;
};

} // namespace ibf
