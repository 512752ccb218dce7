#pragma once

// Deterministic random streams. A game run owns three independent streams
// (coin tosses, player one, player two) derived from one seed, so changing
// a strategy never perturbs the tosses. Raw engine output is mapped to
// doubles/indices by hand; no std distributions, so results are identical
// across standard library implementations.

#include <cstdint>
#include <random>

namespace towgame {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Child seed for an independent reproducible stream.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t s = seed ^ (0xD1B54A32D192ED03ull * (stream + 1));
    return splitmix64(s);
}

using RngEngine = std::mt19937_64;

inline RngEngine make_engine(std::uint64_t seed, std::uint64_t stream = 0) {
    return RngEngine(derive_seed(seed, stream));
}

/// Uniform double in [0, 1).
inline double uniform01(RngEngine& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_range(RngEngine& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

/// Uniform integer in [0, n); n > 0.
inline std::uint64_t uniform_below(RngEngine& rng, std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(rng()) * n) >> 64);
}

inline bool fair_coin(RngEngine& rng) { return (rng() >> 63) != 0; }

}  // namespace towgame
