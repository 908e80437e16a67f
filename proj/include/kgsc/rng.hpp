#pragma once
// Deterministic randomness helpers.
//
// All stochastic code in the library draws through these functions instead of
// <random> distributions: mt19937_64 output is pinned by the standard, but
// normal_distribution / uniform_int_distribution are implementation-defined,
// which would break run-to-run reproducibility across standard libraries.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>

namespace kgsc {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Independent substream for (seed, sweep point, trial). Trials may run in
// parallel; each derives its own generator so schedule order cannot matter.
inline Rng derive_rng(std::uint64_t seed, std::uint64_t sweep_index, std::uint64_t trial_index) {
    return Rng(splitmix64(seed ^ splitmix64((0x5157f4c1b0e5e3a1ull + sweep_index) ^ splitmix64(trial_index))));
}

// Uniform double in [0, 1), 53-bit resolution.
inline double uniform_double(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n), rejection-sampled so it is modulo-bias free.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("uniform_below: empty range");
    const std::uint64_t rem = (0ull - n) % n;  // 2^64 mod n
    for (;;) {
        const std::uint64_t x = rng();
        if (x >= rem) return (x - rem) % n;
    }
}

inline bool bernoulli(Rng& rng, double p) {
    return uniform_double(rng) < p;
}

// Standard normal via Box-Muller (cosine branch). Two draws per sample keeps
// the generator state independent of any cached second value.
inline double gaussian(Rng& rng) {
    const double u1 = (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
    const double u2 = uniform_double(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace kgsc
