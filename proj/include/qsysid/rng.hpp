#pragma once

#include <cstdint>
#include <random>

namespace qsysid {

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Hash of (a, b) used to derive per-run seeds and substreams.
std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b);

/// Seeded PRNG stream identified by (seed, substream).
///
/// The engine is mt19937_64 and all distributions come from Boost.Random,
/// whose algorithms are fixed, so a given (seed, substream, call sequence)
/// produces the same draws on every platform. A handle is single-threaded:
/// move it between threads, never share it.
class Rng {
public:
    using Engine = std::mt19937_64;
    using result_type = Engine::result_type;

    explicit Rng(std::uint64_t seed, std::uint64_t substream = 0);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t substream_index() const { return substream_; }

    /// Independent stream (seed, hash_combine(substream, index)).
    Rng substream(std::uint64_t index) const;

    /// Uniform on [0, 1).
    double uniform();
    /// Standard normal.
    double normal();
    /// Exponential with the given rate.
    double exponential(double rate);

    // UniformRandomBitGenerator interface, so Boost distributions accept it.
    static constexpr result_type min() { return Engine::min(); }
    static constexpr result_type max() { return Engine::max(); }
    result_type operator()() { return engine_(); }

private:
    std::uint64_t seed_;
    std::uint64_t substream_;
    Engine engine_;
};

}  // namespace qsysid
