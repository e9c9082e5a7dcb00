#pragma once

#include <vector>

#include "hwepi/complex_structure.hpp"
#include "hwepi/model.hpp"
#include "hwepi/within_complex.hpp"

namespace hwepi {

/// PMF over per-group counts, stored densely in mixed radix (group 0 fastest).
struct GroupPmf {
    std::vector<int> dims;  ///< max count + 1 per group
    std::vector<long double> prob;

    [[nodiscard]] std::vector<int> unravel(std::size_t index) const;
    [[nodiscard]] long double total() const;
};

/// Final-size law of a multitype Reed-Frost epidemic: group g has susceptible[g]
/// susceptibles and initial[g] initial infectives; an infective of group a
/// escapes contact with a given member of group b with probability exp(-rate[a][b]).
/// Returns the PMF of the number of susceptibles infected per group.
GroupPmf reed_frost_final_size(const std::vector<int>& susceptible, const std::vector<int>& initial,
                               const std::vector<std::vector<double>>& rate);

/// Exact law of the per-group infected counts (seed excluded) in a complex
/// when the infectious period is constant; throws ConfigError otherwise.
GroupPmf exact_final_state_dist(const ComplexStructure& s, const ModelParams& params,
                                SeedConstraint c = SeedConstraint::none());

}  // namespace hwepi
