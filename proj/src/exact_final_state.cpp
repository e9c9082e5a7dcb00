#include "hwepi/exact_final_state.hpp"

#include <cmath>
#include <map>
#include <numeric>

#include "hwepi/errors.hpp"

namespace hwepi {
namespace {

long double choose(int n, int k) {
    if (k < 0 || k > n) return 0.0L;
    long double c = 1.0L;
    for (int i = 1; i <= k; ++i) c = c * static_cast<long double>(n - k + i) / static_cast<long double>(i);
    return c;
}

std::vector<std::size_t> strides_of(const std::vector<int>& dims) {
    std::vector<std::size_t> st(dims.size());
    std::size_t s = 1;
    for (std::size_t g = 0; g < dims.size(); ++g) {
        st[g] = s;
        s *= static_cast<std::size_t>(dims[g]);
    }
    return st;
}

// Calls f(c, weight) for every way of spreading `count` uniformly chosen
// members over groups with the given pool sizes (multivariate hypergeometric).
template <typename F>
void for_each_allocation(const std::vector<int>& pool, int count, F&& f) {
    const int total = std::accumulate(pool.begin(), pool.end(), 0);
    if (count < 0 || count > total) throw ConfigError("seed contact count exceeds eligible partners");
    const long double denom = choose(total, count);
    std::vector<int> c(pool.size(), 0);
    auto rec = [&](auto&& self, std::size_t g, int left, long double w) -> void {
        if (g + 1 == pool.size()) {
            if (left > pool[g]) return;
            c[g] = left;
            f(c, w * choose(pool[g], left) / denom);
            return;
        }
        for (int x = 0; x <= std::min(left, pool[g]); ++x) {
            c[g] = x;
            self(self, g + 1, left - x, w * choose(pool[g], x));
        }
    };
    if (pool.empty()) {
        if (count == 0) f(c, 1.0L);
        return;
    }
    rec(rec, 0, count, 1.0L);
}

}  // namespace

std::vector<int> GroupPmf::unravel(std::size_t index) const {
    std::vector<int> out(dims.size());
    for (std::size_t g = 0; g < dims.size(); ++g) {
        out[g] = static_cast<int>(index % static_cast<std::size_t>(dims[g]));
        index /= static_cast<std::size_t>(dims[g]);
    }
    return out;
}

long double GroupPmf::total() const { return std::accumulate(prob.begin(), prob.end(), 0.0L); }

GroupPmf reed_frost_final_size(const std::vector<int>& susceptible, const std::vector<int>& initial,
                               const std::vector<std::vector<double>>& rate) {
    const std::size_t G = susceptible.size();
    if (initial.size() != G || rate.size() != G) throw ConfigError("group vectors differ in length");
    GroupPmf out;
    for (int n : susceptible) {
        if (n < 0) throw ConfigError("negative susceptible count");
        out.dims.push_back(n + 1);
    }
    const auto stride = strides_of(out.dims);
    const std::size_t N = stride.empty() ? 1 : stride.back() * static_cast<std::size_t>(out.dims.back());

    // escape(k)[g]: probability that one group-g susceptible avoids all infectives when
    // the k newly infected plus the initial infectives are infectious.
    auto escape = [&](const std::vector<int>& k, std::vector<long double>& r) {
        for (std::size_t b = 0; b < G; ++b) {
            long double e = 0.0L;
            for (std::size_t a = 0; a < G; ++a)
                e += static_cast<long double>(rate[a][b]) * static_cast<long double>(k[a] + initial[a]);
            r[b] = std::exp(-e);
        }
    };

    // a(l) = P(the epidemic restricted to the set l infects all of it); solved by
    // sum_{k<=l} C(l,k) a(k) prod_g r_g(k)^(l_g-k_g) = 1, pushing each solved a(k) forward.
    std::vector<long double> a(N, 0.0L), acc(N, 0.0L);
    std::vector<long double> r(G), suffix(G + 1, 1.0L);
    std::vector<std::vector<long double>> F(G);
    std::vector<int> k(G, 0), l(G);
    for (std::size_t ki = 0; ki < N; ++ki) {
        // k is kept in step with ki by the odometer at the end of the loop.
        const long double ak = 1.0L - acc[ki];
        a[ki] = ak;
        escape(k, r);
        for (std::size_t g = 0; g < G; ++g) {
            F[g].assign(static_cast<std::size_t>(susceptible[g] + 1), 0.0L);
            long double pw = 1.0L;
            for (int e = k[g]; e <= susceptible[g]; ++e) {
                F[g][static_cast<std::size_t>(e)] = choose(e, k[g]) * pw;
                pw *= r[g];
            }
        }
        l = k;
        for (std::size_t g = G; g-- > 0;) suffix[g] = F[g][static_cast<std::size_t>(l[g])] * suffix[g + 1];
        std::size_t li = ki;
        while (true) {
            if (li != ki) acc[li] += ak * suffix[0];
            std::size_t g = 0;
            for (; g < G; ++g) {
                if (l[g] < susceptible[g]) {
                    ++l[g];
                    li += stride[g];
                    break;
                }
                li -= static_cast<std::size_t>(l[g] - k[g]) * stride[g];
                l[g] = k[g];
            }
            if (g == G) break;
            for (std::size_t gg = g + 1; gg-- > 0;)
                suffix[gg] = F[gg][static_cast<std::size_t>(l[gg])] * suffix[gg + 1];
        }
        for (std::size_t g = 0; g < G; ++g) {
            if (k[g] < susceptible[g]) {
                ++k[g];
                break;
            }
            k[g] = 0;
        }
    }

    out.prob.assign(N, 0.0L);
    std::fill(k.begin(), k.end(), 0);
    for (std::size_t li = 0; li < N; ++li) {
        escape(k, r);
        long double p = a[li];
        for (std::size_t g = 0; g < G; ++g) p *= choose(susceptible[g], k[g]) * std::pow(r[g], susceptible[g] - k[g]);
        out.prob[li] = p;
        for (std::size_t g = 0; g < G; ++g) {
            if (k[g] < susceptible[g]) {
                ++k[g];
                break;
            }
            k[g] = 0;
        }
    }
    return out;
}

GroupPmf exact_final_state_dist(const ComplexStructure& s, const ModelParams& params, SeedConstraint c) {
    if (!params.infectious_period.is_constant())
        throw ConfigError("exact final-state distribution needs a constant infectious period");
    s.validate();
    const int G = s.groups();
    const int sg = s.seed_group();
    const double bh = params.beta_h_pair(), bw = params.beta_w_pair();
    std::vector<std::vector<double>> rate(static_cast<std::size_t>(G), std::vector<double>(static_cast<std::size_t>(G)));
    for (int a = 0; a < G; ++a)
        for (int b = 0; b < G; ++b) rate[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = s.pair_rate(a, b, bh, bw);

    std::vector<int> others = s.sizes;
    --others[static_cast<std::size_t>(sg)];

    if (c.kind == SeedConstraint::Kind::none) {
        std::vector<int> init(static_cast<std::size_t>(G), 0);
        init[static_cast<std::size_t>(sg)] = 1;
        return reed_frost_final_size(others, init, rate);
    }

    // The seed is inert once its contacts are fixed; the contacted members are
    // the initial infectives of the rest of the epidemic.
    std::map<std::vector<int>, long double> start;
    auto pool_of = [&](bool household) {
        std::vector<int> pool(static_cast<std::size_t>(G), 0);
        for (int g = 0; g < G; ++g) {
            const bool ok = household ? ComplexStructure::same_household(g, sg, s.d)
                                      : (s.in_workplace(g) && s.in_workplace(sg));
            if (ok) pool[static_cast<std::size_t>(g)] = others[static_cast<std::size_t>(g)];
        }
        return pool;
    };
    if (c.kind == SeedConstraint::Kind::exactly) {
        if (s.seed == SeedType::R) throw ConfigError("remainer seeds take a (j,l) constraint");
        for_each_allocation(pool_of(s.seed == SeedType::H), c.l,
                            [&](const std::vector<int>& alloc, long double w) { start[alloc] += w; });
    } else {
        if (s.seed != SeedType::R) throw ConfigError("(j,l) constraints apply to remainer seeds only");
        const int shared = others[0];  // housemates who are also colleagues
        for_each_allocation(pool_of(true), c.j, [&](const std::vector<int>& hc, long double wh) {
            for_each_allocation(pool_of(false), c.l, [&](const std::vector<int>& wc, long double ww) {
                const int x = hc[0], y = wc[0];
                for (int o = std::max(0, x + y - shared); o <= std::min(x, y); ++o) {
                    const long double po = choose(x, o) * choose(shared - x, y - o) / choose(shared, y);
                    std::vector<int> alloc(static_cast<std::size_t>(G));
                    for (int g = 0; g < G; ++g) alloc[static_cast<std::size_t>(g)] = hc[static_cast<std::size_t>(g)] + wc[static_cast<std::size_t>(g)];
                    alloc[0] -= o;
                    start[alloc] += wh * ww * po;
                }
            });
        });
    }

    GroupPmf out;
    for (int n : others) out.dims.push_back(n + 1);
    const auto stride = strides_of(out.dims);
    out.prob.assign(stride.back() * static_cast<std::size_t>(out.dims.back()), 0.0L);
    for (const auto& [alloc, w] : start) {
        std::vector<int> sus(static_cast<std::size_t>(G));
        for (int g = 0; g < G; ++g) sus[static_cast<std::size_t>(g)] = others[static_cast<std::size_t>(g)] - alloc[static_cast<std::size_t>(g)];
        const auto part = reed_frost_final_size(sus, alloc, rate);
        for (std::size_t i = 0; i < part.prob.size(); ++i) {
            const auto l = part.unravel(i);
            std::size_t idx = 0;
            for (int g = 0; g < G; ++g) idx += static_cast<std::size_t>(l[static_cast<std::size_t>(g)] + alloc[static_cast<std::size_t>(g)]) * stride[static_cast<std::size_t>(g)];
            out.prob[idx] += w * part.prob[i];
        }
    }
    return out;
}

}  // namespace hwepi
