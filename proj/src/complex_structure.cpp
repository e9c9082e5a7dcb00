#include "hwepi/complex_structure.hpp"

#include <cmath>
#include <numeric>
#include <random>

#include "hwepi/errors.hpp"

namespace hwepi {

char to_char(SeedType x) {
    switch (x) {
        case SeedType::R: return 'R';
        case SeedType::H: return 'H';
        case SeedType::W: return 'W';
    }
    return '?';
}

SeedType parse_seed_type(const std::string& text) {
    if (text == "R") return SeedType::R;
    if (text == "H") return SeedType::H;
    if (text == "W") return SeedType::W;
    throw ConfigError("unknown seed type '" + text + "'");
}

SeedType offspring_type(int group, int d) {
    if (group == 2 * d) return SeedType::H;
    return group % 2 == 0 ? SeedType::R : SeedType::W;
}

int ComplexStructure::seed_group() const {
    switch (seed) {
        case SeedType::R: return 0;
        case SeedType::H: return 1;
        case SeedType::W: return 2 * d;
    }
    return 0;
}

int ComplexStructure::total() const { return std::accumulate(sizes.begin(), sizes.end(), 0); }

double ComplexStructure::pair_rate(int g1, int g2, double beta_h_pair, double beta_w_pair) const {
    double r = 0.0;
    if (same_household(g1, g2, d)) r += beta_h_pair;
    if (in_workplace(g1) && in_workplace(g2)) r += beta_w_pair;
    return r;
}

void ComplexStructure::validate() const {
    if (static_cast<int>(sizes.size()) != groups()) throw ConfigError("complex needs 2d+1 groups");
    int incoming = 0, workplace = 0;
    for (int j = 0; j < d; ++j) {
        if (sizes[2 * j] < 0 || sizes[2 * j + 1] < 0) throw ConfigError("negative group size");
        if (sizes[2 * j] + sizes[2 * j + 1] != h) throw ConfigError("household block does not sum to h");
        incoming += sizes[2 * j + 1];
        workplace += sizes[2 * j];
    }
    workplace += sizes[2 * d];
    if (sizes[2 * d] != incoming) throw ConfigError("incoming movers do not refill the vacated spots");
    if (workplace != h * d) throw ConfigError("realized workplace size differs from w");
    if (sizes[seed_group()] < 1) throw ConfigError("seed group is empty");
}

ComplexStructure make_structure(int h, int d, SeedType seed, const std::vector<int>& movers) {
    if (static_cast<int>(movers.size()) != d) throw ConfigError("need one mover count per household");
    ComplexStructure s{h, d, seed, std::vector<int>(static_cast<std::size_t>(2 * d + 1), 0)};
    const int extra = seed == SeedType::R ? 0 : 1;
    int incoming = extra;
    for (int j = 0; j < d; ++j) {
        const int m = movers[static_cast<std::size_t>(j)] + (j == 0 ? extra : 0);
        s.sizes[static_cast<std::size_t>(2 * j)] = h - m;
        s.sizes[static_cast<std::size_t>(2 * j + 1)] = m;
        incoming += movers[static_cast<std::size_t>(j)];
    }
    s.sizes[static_cast<std::size_t>(2 * d)] = incoming;
    s.validate();
    return s;
}

ComplexStructure sample_structure(const ModelParams& params, SeedType seed, Rng& rng) {
    if (seed != SeedType::R && params.theta <= 0.0)
        throw ConfigError("a mover seed needs theta > 0");
    std::vector<int> m(static_cast<std::size_t>(params.d));
    for (int j = 0; j < params.d; ++j) {
        std::binomial_distribution<int> bin(j == 0 ? params.h - 1 : params.h, params.theta);
        m[static_cast<std::size_t>(j)] = bin(rng);
    }
    return make_structure(params.h, params.d, seed, m);
}

namespace {
double binom_pmf(int n, int k, double p) {
    if (k < 0 || k > n) return 0.0;
    if (p <= 0.0) return k == 0 ? 1.0 : 0.0;
    if (p >= 1.0) return k == n ? 1.0 : 0.0;
    const double lc = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
    return std::exp(lc + k * std::log(p) + (n - k) * std::log1p(-p));
}
}  // namespace

double structure_weight(int h, const std::vector<int>& movers, double theta) {
    double w = 1.0;
    for (std::size_t j = 0; j < movers.size(); ++j)
        w *= binom_pmf(j == 0 ? h - 1 : h, movers[j], theta);
    return w;
}

std::vector<std::vector<int>> canonical_mover_vectors(int h, int d) {
    std::vector<std::vector<int>> out;
    std::vector<int> m(static_cast<std::size_t>(d), 0);
    // Odometer over M_1 and a nondecreasing tail.
    while (true) {
        out.push_back(m);
        int j = d - 1;
        for (; j >= 1; --j) {
            if (m[static_cast<std::size_t>(j)] < h) {
                const int v = ++m[static_cast<std::size_t>(j)];
                for (int k = j + 1; k < d; ++k) m[static_cast<std::size_t>(k)] = v;
                break;
            }
        }
        if (j >= 1) continue;
        if (++m[0] > h - 1) break;
        for (int k = 1; k < d; ++k) m[static_cast<std::size_t>(k)] = 0;
    }
    return out;
}

double canonical_weight(int h, const std::vector<int>& movers, double theta) {
    // Number of distinct orderings of the tail = multinomial coefficient.
    double perms = 1.0;
    int run = 0, len = 0;
    for (std::size_t j = 1; j < movers.size(); ++j) {
        ++len;
        run = (j > 1 && movers[j] == movers[j - 1]) ? run + 1 : 1;
        perms *= static_cast<double>(len) / static_cast<double>(run);
    }
    return perms * structure_weight(h, movers, theta);
}

std::vector<WeightedStructure> enumerate_structures(int h, int d, SeedType seed, double theta) {
    if (theta < 0.0 || theta > 1.0) throw ConfigError("theta must lie in [0,1]");
    std::vector<WeightedStructure> out;
    for (const auto& m : canonical_mover_vectors(h, d)) {
        const double w = canonical_weight(h, m, theta);
        if (w > 0.0) out.push_back({make_structure(h, d, seed, m), m, w});
    }
    return out;
}

}  // namespace hwepi
