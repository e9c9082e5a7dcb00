#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace hwepi {

/// Identifies one pseudo-random stream: (base seed, stream id) -> stream is a pure function.
struct SeedSpec {
    std::uint64_t base = 0;
    std::uint64_t stream = 0;

    /// A sub-stream keyed by an extra tag; used to give each run, individual or
    /// table shard its own generator without sharing state between workers.
    [[nodiscard]] SeedSpec child(std::uint64_t tag) const;

    friend bool operator==(const SeedSpec&, const SeedSpec&) = default;
};

std::uint64_t splitmix64(std::uint64_t& state);
std::uint64_t mix64(std::uint64_t x);

/// xoshiro256** seeded through splitmix64. Cheap to construct, so the simulator
/// can afford one generator per individual.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(SeedSpec seed);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()();

    /// Uniform on [0,1) with 53 random bits.
    double uniform();
    /// Uniform on (0,1]; safe to pass to log().
    double uniform_pos() { return 1.0 - uniform(); }
    /// Exp(1) variate by inversion.
    double exponential();
    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n);

    /// Number of 64-bit words consumed since construction.
    [[nodiscard]] std::uint64_t draws() const { return draws_; }

private:
    std::array<std::uint64_t, 4> s_{};
    std::uint64_t draws_ = 0;
};

}  // namespace hwepi
