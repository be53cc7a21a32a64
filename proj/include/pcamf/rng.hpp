// Counter-based deterministic random numbers.
//
// Every draw is a pure function of (seed, key...) so that edge sampling,
// node initialisation and per-step updates are order-independent and
// bit-reproducible regardless of evaluation order or thread count.
#pragma once

#include <cstdint>

namespace pcamf {

// splitmix64 finalizer (Vigna); full-avalanche 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Disjoint key spaces for the different consumers of one seed.
enum class RngStream : std::uint64_t {
    edge_pair = 1,     // graph construction, keyed by pair index
    init_count = 2,    // initial active-node count
    init_shuffle = 3,  // Fisher-Yates draws for the initial placement
    init_bernoulli = 4,// iid initialisation at explicit rho0
    step = 5,          // per-step per-node update draws
    graph = 6,         // per-run graph seed derivation
    run = 7,           // per-run PCA seed derivation
    chain = 8,         // density-chain sampling (markov tests)
};

constexpr std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t k1,
                                     std::uint64_t k2 = 0, std::uint64_t k3 = 0) noexcept {
    std::uint64_t h = mix64(seed);
    h = mix64(h ^ k1);
    h = mix64(h ^ k2);
    h = mix64(h ^ k3);
    return h;
}

constexpr std::uint64_t counter_hash(std::uint64_t seed, RngStream s,
                                     std::uint64_t k2 = 0, std::uint64_t k3 = 0) noexcept {
    return counter_hash(seed, static_cast<std::uint64_t>(s), k2, k3);
}

// Uniform double in [0, 1) from 53 high bits.
constexpr double to_unit(std::uint64_t bits) noexcept {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

inline double uniform01(std::uint64_t seed, RngStream s,
                        std::uint64_t k2 = 0, std::uint64_t k3 = 0) noexcept {
    return to_unit(counter_hash(seed, s, k2, k3));
}

inline bool bernoulli(double prob, std::uint64_t seed, RngStream s,
                      std::uint64_t k2 = 0, std::uint64_t k3 = 0) noexcept {
    return uniform01(seed, s, k2, k3) < prob;
}

// Uniform integer in [0, bound] via 128-bit multiply.
constexpr std::uint64_t uniform_below(std::uint64_t bits, std::uint64_t bound_inclusive) noexcept {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(bits) * (bound_inclusive + 1)) >> 64);
}

// Seed derivation for independent sub-streams (per-run, per-cell seeds).
constexpr std::uint64_t derive_seed(std::uint64_t seed, RngStream s, std::uint64_t k = 0) noexcept {
    return counter_hash(seed, s, k);
}

} // namespace pcamf
