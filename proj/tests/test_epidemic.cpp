#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hwepi/epidemic.hpp"
#include "hwepi/population.hpp"

using namespace hwepi;

namespace {

ModelParams fig1(double theta, std::int64_t n) {
    ModelParams p;
    p.h = 4;
    p.d = 1;
    p.theta = theta;
    p.n = n;
    p.rates = from_reparam({3.0, 0.025, 0.5});
    return p;
}

}  // namespace

TEST_CASE("no contacts means only the initial infective") {
    auto p = fig1(0.4, 200);
    p.rates = {0.0, 0.0, 0.0};
    const auto pop = generate_population(p, SeedSpec{1, 0});
    for (int r = 0; r < 20; ++r) {
        const auto o = simulate_final(pop, p, SeedSpec{2, static_cast<std::uint64_t>(r)});
        CHECK(o.final_size == 1);
        CHECK(o.infected[static_cast<std::size_t>(o.initial)] == 1);
        CHECK(o.severity == 1.0);
    }
}

TEST_CASE("without movers or global contacts the epidemic stays in one workplace") {
    auto p = fig1(0.0, 400);
    p.d = 2;
    p.rates = {4.0, 4.0, 0.0};
    const auto pop = generate_population(p, SeedSpec{1, 0});
    for (int r = 0; r < 50; ++r) {
        const auto o = simulate_final(pop, p, SeedSpec{3, static_cast<std::uint64_t>(r)});
        CHECK(o.final_size <= p.w());
        for (PersonId i = 0; i < pop.size(); ++i)
            if (o.infected[static_cast<std::size_t>(i)]) CHECK(pop.final_workplace(i) == pop.final_workplace(o.initial));
    }
}

TEST_CASE("two-person population matches the closed form") {
    ModelParams p;
    p.h = 2;
    p.d = 1;
    p.n = 2;
    p.rates = {0.6, 0.5, 0.0};
    const auto pop = generate_population(p, SeedSpec{1, 0});
    const int N = 100000;
    int both = 0;
    for (int r = 0; r < N; ++r) both += simulate_final(pop, p, SeedSpec{4, static_cast<std::uint64_t>(r)}).final_size == 2;
    CHECK(std::abs(both / static_cast<double>(N) - (1.0 - std::exp(-1.1))) < 0.005);
}

TEST_CASE("outcomes are deterministic and closed under infection") {
    const auto p = fig1(0.4, 1000);
    const auto pop = generate_population(p, SeedSpec{9, 0});
    const auto a = simulate_final(pop, p, SeedSpec{9, 1});
    const auto b = simulate_final(pop, p, SeedSpec{9, 1});
    CHECK(a.final_size == b.final_size);
    CHECK(a.severity == b.severity);
    CHECK(a.infected == b.infected);
    // Every infected non-initial individual has an infected infector.
    std::vector<std::uint8_t> reached(static_cast<std::size_t>(pop.size()), 0);
    reached[static_cast<std::size_t>(a.initial)] = 1;
    for (PersonId u = 0; u < pop.size(); ++u) {
        if (!a.infected[static_cast<std::size_t>(u)]) continue;
        const auto c = draw_contacts(pop, p, SeedSpec{9, 1}.child(static_cast<std::uint64_t>(u)), u, true);
        for (PersonId v : c.local) reached[static_cast<std::size_t>(v)] = 1;
        for (PersonId v : c.global) reached[static_cast<std::size_t>(v)] = 1;
    }
    for (PersonId u = 0; u < pop.size(); ++u)
        if (a.infected[static_cast<std::size_t>(u)]) CHECK(reached[static_cast<std::size_t>(u)] == 1);
    CHECK(std::count(a.infected.begin(), a.infected.end(), 1) == a.final_size);
}

TEST_CASE("raising a rate never shrinks the infected set") {
    auto lo = fig1(0.3, 400);
    lo.rates = {0.8, 0.8, 0.05};
    const auto pop = generate_population(lo, SeedSpec{10, 0});
    for (int k = 0; k < 3; ++k) {
        auto hi = lo;
        (k == 0 ? hi.rates.beta_h : k == 1 ? hi.rates.beta_w : hi.rates.beta_g) *= 1.7;
        for (int r = 0; r < 100; ++r) {
            const SeedSpec s{11, static_cast<std::uint64_t>(r)};
            const auto a = simulate_final(pop, lo, s, 7);
            const auto b = simulate_final(pop, hi, s, 7);
            for (std::size_t i = 0; i < a.infected.size(); ++i) CHECK(a.infected[i] <= b.infected[i]);
        }
    }
}

TEST_CASE("census identities") {
    auto p = fig1(0.4, 240);
    SUBCASE("no local contacts") {
        p.rates = {0.0, 0.0, 5.0};
        const auto pop = generate_population(p, SeedSpec{1, 1});
        const auto c = clump_susset_census(pop, p, SeedSpec{1, 2});
        for (std::size_t i = 0; i < c.clump_size.size(); ++i) {
            CHECK(c.clump_size[i] == 1);
            CHECK(c.susset_size[i] == 1);
        }
    }
    SUBCASE("pair counts agree and the parallel kernel matches the serial one") {
        const auto pop = generate_population(p, SeedSpec{1, 1});
        const auto c = clump_susset_census(pop, p, SeedSpec{1, 3});
        const auto s = clump_susset_census_serial(pop, p, SeedSpec{1, 3});
        CHECK(c.clump_size == s.clump_size);
        CHECK(c.susset_size == s.susset_size);
        CHECK(std::accumulate(c.clump_size.begin(), c.clump_size.end(), std::int64_t{0}) ==
              std::accumulate(c.susset_size.begin(), c.susset_size.end(), std::int64_t{0}));
    }
    SUBCASE("clump of i equals a local-only epidemic from i") {
        auto local = p;
        local.rates.beta_g = 0.0;
        const auto pop = generate_population(p, SeedSpec{1, 1});
        const auto c = clump_susset_census(pop, p, SeedSpec{1, 4});
        for (PersonId i : {0, 17, 99, 238})
            CHECK(simulate_final(pop, local, SeedSpec{1, 4}, i).final_size == c.clump_size[static_cast<std::size_t>(i)]);
    }
}

TEST_CASE("clump and susceptibility-set sizes share a law at constant I") {
    const auto p = fig1(0.4, 960);
    std::vector<std::int64_t> cs, ss;
    for (int g = 0; cs.size() < 10000; ++g) {
        const auto pop = generate_population(p, SeedSpec{30, static_cast<std::uint64_t>(g)});
        const auto c = clump_susset_census(pop, p, SeedSpec{31, static_cast<std::uint64_t>(g)});
        // Spread samples over graphs: individuals far apart are nearly independent.
        for (std::size_t i = 0; i < c.clump_size.size(); i += 97) {
            cs.push_back(c.clump_size[i]);
            ss.push_back(c.susset_size[(i + 48) % c.susset_size.size()]);
        }
    }
    std::sort(cs.begin(), cs.end());
    std::sort(ss.begin(), ss.end());
    // Two-sample Kolmogorov-Smirnov at the 1% level.
    double dmax = 0.0;
    std::size_t a = 0, b = 0;
    while (a < cs.size() && b < ss.size()) {
        const auto x = std::min(cs[a], ss[b]);
        while (a < cs.size() && cs[a] == x) ++a;
        while (b < ss.size() && ss[b] == x) ++b;
        dmax = std::max(dmax, std::abs(static_cast<double>(a) / cs.size() - static_cast<double>(b) / ss.size()));
    }
    const double n = static_cast<double>(cs.size());
    CHECK(dmax < 1.628 * std::sqrt(2.0 / n));
}
