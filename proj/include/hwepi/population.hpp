#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "hwepi/model.hpp"
#include "hwepi/rng.hpp"

namespace hwepi {

using PersonId = std::int32_t;

/// Realized assignment of n individuals to households and workplaces.
///
/// Individuals are numbered so that household k holds ids [k*h, (k+1)*h) and
/// original workplace i holds households [i*d, (i+1)*d). Only the final
/// workplace is random; it is stored per individual together with an inverted
/// index (members of final workplace i occupy [i*w, (i+1)*w) of
/// workplace_members()).
class Population {
public:
    /// Builds a population from an explicit assignment and checks every invariant.
    static Population from_assignment(int h, int d, std::vector<PersonId> final_workplace,
                                      std::vector<std::uint8_t> mover);

    [[nodiscard]] int h() const { return h_; }
    [[nodiscard]] int d() const { return d_; }
    [[nodiscard]] int w() const { return h_ * d_; }
    [[nodiscard]] std::int64_t size() const { return static_cast<std::int64_t>(final_workplace_.size()); }
    [[nodiscard]] PersonId num_workplaces() const { return static_cast<PersonId>(size() / w()); }
    [[nodiscard]] PersonId num_households() const { return static_cast<PersonId>(size() / h_); }

    [[nodiscard]] PersonId household(PersonId i) const { return i / h_; }
    [[nodiscard]] PersonId orig_workplace(PersonId i) const { return i / w(); }
    [[nodiscard]] PersonId final_workplace(PersonId i) const { return final_workplace_[static_cast<std::size_t>(i)]; }
    [[nodiscard]] bool is_mover(PersonId i) const { return mover_[static_cast<std::size_t>(i)] != 0; }
    [[nodiscard]] std::int64_t mover_count() const;

    /// First member of i's household; members are contiguous.
    [[nodiscard]] PersonId household_begin(PersonId i) const { return household(i) * h_; }
    [[nodiscard]] std::span<const PersonId> workplace_members(PersonId workplace) const;

    /// Throws ConfigError if an invariant does not hold.
    void validate() const;

private:
    Population(int h, int d, std::vector<PersonId> final_workplace, std::vector<std::uint8_t> mover);

    int h_;
    int d_;
    std::vector<PersonId> final_workplace_;
    std::vector<std::uint8_t> mover_;
    std::vector<PersonId> members_;
};

/// Draws mover flags i.i.d. Bernoulli(theta) and assigns movers to the vacated
/// spots by a uniformly random bijection. A pure function of (params, seed).
Population generate_population(const ModelParams& params, SeedSpec seed);

/// Members of one complex, grouped as in the complex decomposition. Group
/// indices are zero-based: 2j holds the remainers of the complex's household j,
/// 2j+1 its movers who left, and 2d the movers who arrived.
struct Complex {
    PersonId workplace = 0;
    std::vector<std::vector<PersonId>> groups;

    [[nodiscard]] int d() const { return static_cast<int>(groups.size() / 2); }
    [[nodiscard]] const std::vector<PersonId>& incoming() const { return groups.back(); }
};

std::vector<Complex> extract_complexes(const Population& pop);

/// CSV with columns individual,household,orig_workplace,final_workplace,mover.
void write_population_csv(const Population& pop, std::ostream& out);
/// Reads the CSV written above; h and d are needed to rebuild the deterministic partition.
Population read_population_csv(std::istream& in, int h, int d);

}  // namespace hwepi
