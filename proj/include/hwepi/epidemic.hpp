#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hwepi/model.hpp"
#include "hwepi/population.hpp"
#include "hwepi/rng.hpp"

namespace hwepi {

/// Final outcome of one epidemic.
struct Outcome {
    std::int64_t final_size = 0;
    double severity = 0.0;  ///< sum of infectious periods of the ever-infected
    PersonId initial = 0;
    std::vector<std::uint8_t> infected;
};

/// Randomness of individual u is drawn from its own stream `seed.child(u)`, in a
/// fixed order: I_u, one uniform per household member, one per remaining
/// workplace member, then the unit-rate points of its global contact process.
/// Edges are therefore per-directed-pair uniform thresholds, the infected set
/// does not depend on exploration order, and raising any rate can only add edges.
struct ContactDraw {
    double infectious_period = 0.0;
    std::vector<PersonId> local;   ///< local out-neighbours (edges present)
    std::vector<PersonId> global;  ///< global contact targets, repeats allowed
};

ContactDraw draw_contacts(const Population& pop, const ModelParams& params, SeedSpec seed, PersonId u,
                          bool with_global);

/// Final outcome by breadth-first exploration of the percolation graph.
/// `initial` empty means a uniformly chosen initial infective.
Outcome simulate_final(const Population& pop, const ModelParams& params, SeedSpec seed,
                       std::optional<PersonId> initial = std::nullopt);

/// Sizes of every local infectious clump (out-component) and local
/// susceptibility set (in-component) on one realization of the local graph.
struct Census {
    std::vector<std::int64_t> clump_size;
    std::vector<std::int64_t> susset_size;
};

/// Local edges only; beta_G is ignored. Uses the same per-individual streams
/// as simulate_final, so the clump of i equals the infected set of a
/// beta_G = 0 epidemic started at i with the same seed.
Census clump_susset_census(const Population& pop, const ModelParams& params, SeedSpec seed);
Census clump_susset_census_serial(const Population& pop, const ModelParams& params, SeedSpec seed);

}  // namespace hwepi
