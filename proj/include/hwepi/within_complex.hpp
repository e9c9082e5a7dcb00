#pragma once

#include <cstdint>
#include <vector>

#include "hwepi/complex_structure.hpp"
#include "hwepi/model.hpp"
#include "hwepi/rng.hpp"

namespace hwepi {

/// What is known about the initial infective's own contacts in the complex.
struct SeedConstraint {
    enum class Kind { none, exactly, remainer };
    Kind kind = Kind::none;
    int j = 0;  ///< housemates contacted (remainer seeds)
    int l = 0;  ///< contacts in its household (H) or workplace (W); colleagues for remainer seeds

    static SeedConstraint none() { return {}; }
    static SeedConstraint exactly(int l) { return {Kind::exactly, 0, l}; }
    static SeedConstraint remainer(int j, int l) { return {Kind::remainer, j, l}; }
};

/// Index of fine type (Y,k) in a vector of length h+w-2: (H,k) -> k-1, (W,k) -> h-2+k.
inline int fine_index(SeedType y, int k, int h) { return y == SeedType::H ? k - 1 : h - 2 + k; }
inline int fine_dim(int h, int d) { return h + h * d - 2; }

struct WithinComplexOutcome {
    std::vector<int> infected;  ///< per group, seed excluded
    double severity = 0.0;      ///< sum of infectious periods, seed excluded
    int z_r = 0, z_h = 0, z_w = 0;
    std::vector<int> fine;  ///< counts of (Y,k) offspring, k >= 1; filled only when requested
};

struct SussetOutcome {
    std::vector<int> members;  ///< per group, seed excluded
    int z_r = 0, z_h = 0, z_w = 0;
    int periods_drawn = 0;
    bool seed_period_drawn = false;
};

/// Within-complex percolation on a fixed structure. Construction precomputes
/// the member list and pairwise rates so that repeated sampling is cheap.
class ComplexSampler {
public:
    ComplexSampler(const ComplexStructure& s, const ModelParams& params);

    /// Infected set of the seed. Constrained seeds contact uniformly chosen
    /// eligible partners and are otherwise inert; every other infective draws
    /// its own period and Bernoulli edges.
    void clump(Rng& rng, SeedConstraint c, bool with_fine, WithinComplexOutcome& out);
    /// In-component of the seed by backward search; periods are drawn lazily
    /// and the seed's own period is never needed.
    void susset(Rng& rng, SussetOutcome& out);

    [[nodiscard]] const ComplexStructure& structure() const { return s_; }
    [[nodiscard]] int housemates() const { return static_cast<int>(house_.size()); }
    [[nodiscard]] int colleagues() const { return static_cast<int>(work_.size()); }

private:
    double edge_prob(int rate_class, double I) const;
    void infect(int v, std::vector<int>& queue);

    ComplexStructure s_;
    ModelParams params_;
    int k_ = 0;
    int seed_ = 0;
    std::vector<int> group_;
    std::vector<std::uint8_t> rate_class_;  ///< k*k; bit 0 household, bit 1 workplace
    std::vector<int> house_, work_;         ///< seed's housemates and colleagues
    std::vector<std::uint8_t> flag_;
    std::vector<double> period_;
    std::vector<int> scratch_;
};

WithinComplexOutcome run_within_complex(const ComplexStructure& s, const ModelParams& params, Rng& rng,
                                        SeedConstraint c = SeedConstraint::none(), bool with_fine = false);
SussetOutcome susset_within_complex(const ComplexStructure& s, const ModelParams& params, Rng& rng);

}  // namespace hwepi
