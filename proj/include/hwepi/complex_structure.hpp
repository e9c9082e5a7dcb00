#pragma once

#include <string>
#include <vector>

#include "hwepi/model.hpp"
#include "hwepi/rng.hpp"

namespace hwepi {

/// How the initial infective belongs to the complex: remainer, mover via its
/// household, mover via its workplace.
enum class SeedType { R = 0, H = 1, W = 2 };

char to_char(SeedType x);
SeedType parse_seed_type(const std::string& text);

/// Offspring type of an individual infected inside a complex, by group.
SeedType offspring_type(int group, int d);

/// Group sizes of a complex as seen from its initial infective.
///
/// Groups are zero-based: 2j remainers of household j, 2j+1 movers out of
/// household j, 2d movers in. The seed sits in group 0 (R), 1 (H) or 2d (W) and
/// is counted in that group's size.
struct ComplexStructure {
    int h = 2;
    int d = 1;
    SeedType seed = SeedType::R;
    std::vector<int> sizes;

    [[nodiscard]] int groups() const { return 2 * d + 1; }
    [[nodiscard]] int seed_group() const;
    [[nodiscard]] int total() const;
    [[nodiscard]] bool in_workplace(int g) const { return g == 2 * d || g % 2 == 0; }
    [[nodiscard]] static bool same_household(int g1, int g2, int d) {
        return g1 < 2 * d && g2 < 2 * d && g1 / 2 == g2 / 2;
    }

    /// Per-pair rate between distinct members of groups g1 and g2.
    [[nodiscard]] double pair_rate(int g1, int g2, double beta_h_pair, double beta_w_pair) const;

    /// Checks the size identities; throws ConfigError.
    void validate() const;

    friend bool operator==(const ComplexStructure&, const ComplexStructure&) = default;
};

/// Builds the structure from the mover counts M_1..M_d of the complex's households.
ComplexStructure make_structure(int h, int d, SeedType seed, const std::vector<int>& movers);

/// Draws M_1 ~ Bin(h-1, theta), M_j ~ Bin(h, theta) for j >= 2. Rejects H/W seeds when theta = 0.
ComplexStructure sample_structure(const ModelParams& params, SeedType seed, Rng& rng);

struct WeightedStructure {
    ComplexStructure structure;
    std::vector<int> movers;  ///< M_1..M_d
    double weight = 0.0;
};

/// Mover vectors up to relabelling of households 2..d (M_2 <= ... <= M_d),
/// which leaves every offspring law unchanged.
std::vector<std::vector<int>> canonical_mover_vectors(int h, int d);

/// Probability of the mover vector M itself.
double structure_weight(int h, const std::vector<int>& movers, double theta);
/// Total probability of all relabellings of a canonical mover vector.
double canonical_weight(int h, const std::vector<int>& movers, double theta);

/// Support of the structure law (canonical representatives) with exact
/// probabilities, zero-weight structures dropped. At theta = 0 an H or W seed
/// still yields the single structure M = 0 with weight one.
std::vector<WeightedStructure> enumerate_structures(int h, int d, SeedType seed, double theta);

}  // namespace hwepi
